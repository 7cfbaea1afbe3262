//! Orbits of `O_L^×` on the representatives, for split tori.

use std::collections::BTreeMap;

use serde::Serialize;

use super::search::{EnumConfig, Frame, Mode};
use crate::error::{Error, Result};
use crate::lattice::LatticeBasis;
use crate::localfield::{LocalElement, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitOrbit {
    /// Number of representatives in the orbit.
    pub size: usize,
    /// `[O_L^× : R_Λ^×]` counted modulo `t^k`.
    pub index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitOrbitReport {
    pub orbits: Vec<UnitOrbit>,
    pub representatives: usize,
    /// Level `k` with `1 + t^k O_L` fixing every representative.
    pub level: u32,
}

impl UnitOrbitReport {
    /// Every orbit has the size of its stabilizer index and the indices add
    /// up to the representative count.
    pub fn consistent(&self) -> bool {
        self.orbits.iter().all(|o| o.size as u64 == o.index)
            && self.orbits.iter().map(|o| o.index).sum::<u64>() == self.representatives as u64
    }
}

const MAX_UNITS: u64 = 250_000;

/// Splits the stable-lattice representatives of `x` into `O_L^×`-orbits and
/// counts `[O_L^× : R_Λ^×]` by running over `(O_L / t^k)^×`.
///
/// Only for `x` over `F` with `F[x] ≅ F^n`.
pub fn unit_orbit_check(x: &Matrix) -> Result<UnitOrbitReport> {
    let cfg = EnumConfig::default();
    let Some(frame) = Frame::new(x, Mode::Linear, &cfg)? else {
        return Ok(UnitOrbitReport {
            orbits: Vec::new(),
            representatives: 0,
            level: 0,
        });
    };
    let gf = x.field();
    if gf.degree() != 1 || frame.torus.factors.iter().any(|f| f.root.is_none()) {
        return Err(Error::Unsupported(
            "unit orbits need a split torus over F".into(),
        ));
    }
    let (reps, _) = frame.stable(&cfg)?;
    let n = x.rows();
    let q = gf.order() as u64;
    let es = &frame.torus.idempotents;
    let unit = |coeffs: &[LocalElement]| {
        es.iter()
            .zip(coeffs)
            .fold(Matrix::zeros(gf, n, n), |acc, (e, c)| acc.add(&e.scale(c)))
    };
    let one = LocalElement::one(gf);
    let basis_unit = |j: usize, c: &LocalElement| {
        let mut v = vec![one.clone(); n];
        v[j] = c.clone();
        unit(&v)
    };

    let mut level = 1u32;
    loop {
        let fixes = (0..n).all(|j| {
            let g = basis_unit(j, &(&one + &LocalElement::t_pow(gf, level as i64)));
            reps.iter()
                .all(|l| l.apply(&g).map(|m| &m == l).unwrap_or(false))
        });
        if fixes {
            break;
        }
        level += 1;
        if level > 8 {
            return Err(Error::Unsupported(
                "principal units do not stabilize the representatives".into(),
            ));
        }
    }
    let group_order = ((q - 1) * q.pow(level - 1)).pow(n as u32);
    if group_order > MAX_UNITS {
        return Err(Error::Unsupported(format!(
            "unit group of order {group_order} is too large"
        )));
    }

    let mut gens = Vec::new();
    for j in 0..n {
        gens.push(basis_unit(
            j,
            &LocalElement::constant(gf, gf.primitive_element()),
        ));
        for i in 1..level {
            gens.push(basis_unit(j, &(&one + &LocalElement::t_pow(gf, i as i64))));
        }
    }
    let position: BTreeMap<&LatticeBasis, usize> =
        reps.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut parent: Vec<usize> = (0..reps.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, l) in reps.iter().enumerate() {
        for g in &gens {
            let img = frame.torus.normalize(&l.apply(g)?)?;
            let &k = position.get(&img).ok_or_else(|| {
                Error::NotLattice("unit image outside the representative set".into())
            })?;
            let (a, b) = (root(&mut parent, i), root(&mut parent, k));
            parent[a] = b;
        }
    }
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..reps.len() {
        let r = root(&mut parent, i);
        members.entry(r).or_default().push(i);
    }

    let residues: Vec<LocalElement> = (0..q.pow(level))
        .filter(|&m| m % q != 0)
        .map(|mut m| {
            let mut terms = Vec::new();
            for i in 0..level {
                terms.push((i as i64, (m % q) as i64));
                m /= q;
            }
            LocalElement::from_int_terms(gf, &terms)
        })
        .collect();
    let units: Vec<Matrix> = product(&residues, n).iter().map(|c| unit(c)).collect();
    let mut orbits = Vec::new();
    for idx in members.values() {
        let l = &reps[idx[0]];
        let mut stab = 0u64;
        for u in &units {
            if l.contains(&l.apply(u)?) {
                stab += 1;
            }
        }
        if !group_order.is_multiple_of(stab) {
            return Err(Error::NotLattice(
                "stabilizer order does not divide the group order".into(),
            ));
        }
        orbits.push(UnitOrbit {
            size: idx.len(),
            index: group_order / stab,
        });
    }
    Ok(UnitOrbitReport {
        orbits,
        representatives: reps.len(),
        level,
    })
}

fn product(items: &[LocalElement], n: usize) -> Vec<Vec<LocalElement>> {
    let mut out: Vec<Vec<LocalElement>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .iter()
            .flat_map(|v| {
                items
                    .iter()
                    .map(move |c| [v.clone(), vec![c.clone()]].concat())
            })
            .collect();
    }
    out
}
