//! Subspaces of `F_Q^n` stable under a linear or Frobenius-semilinear map.

use std::collections::{BTreeSet, VecDeque};

use crate::localfield::{Code, Gf};

pub(crate) type FqVec = Vec<Code>;

/// A subspace in reduced row echelon form (rows sorted by pivot).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Subspace {
    pub rows: Vec<FqVec>,
}

/// `v ↦ A v` or `v ↦ A σ(v)` over `F_Q`.
pub(crate) struct FqMap<'a> {
    pub gf: &'static Gf,
    pub mat: &'a [FqVec],
    pub semilinear: bool,
}

impl FqMap<'_> {
    pub fn apply(&self, v: &[Code]) -> FqVec {
        let gf = self.gf;
        let w: FqVec = if self.semilinear {
            v.iter().map(|&c| gf.frobenius(c)).collect()
        } else {
            v.to_vec()
        };
        self.mat
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&w)
                    .fold(0, |acc, (&a, &b)| gf.add(acc, gf.mul(a, b)))
            })
            .collect()
    }
}

fn pivot(v: &[Code]) -> Option<usize> {
    v.iter().position(|&c| c != 0)
}

impl Subspace {
    pub fn zero() -> Self {
        Subspace { rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, gf: &Gf, v: &[Code]) -> FqVec {
        let mut v = v.to_vec();
        for r in &self.rows {
            let p = pivot(r).expect("nonzero row");
            let c = v[p];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(r) {
                    *x = gf.sub(*x, gf.mul(c, y));
                }
            }
        }
        v
    }

    #[cfg(test)]
    pub fn contains(&self, gf: &Gf, v: &[Code]) -> bool {
        self.reduce(gf, v).iter().all(|&c| c == 0)
    }

    /// Adds `v`, returning whether the dimension grew.
    pub fn insert(&mut self, gf: &Gf, v: &[Code]) -> bool {
        let mut v = self.reduce(gf, v);
        let Some(p) = pivot(&v) else { return false };
        let inv = gf.inv(v[p]);
        for x in v.iter_mut() {
            *x = gf.mul(*x, inv);
        }
        for r in self.rows.iter_mut() {
            let c = r[p];
            if c != 0 {
                for (x, &y) in r.iter_mut().zip(&v) {
                    *x = gf.sub(*x, gf.mul(c, y));
                }
            }
        }
        self.rows.push(v);
        self.rows.sort_by_key(|r| pivot(r));
        true
    }

    pub fn span(gf: &Gf, vs: &[FqVec]) -> Self {
        let mut s = Subspace::zero();
        for v in vs {
            s.insert(gf, v);
        }
        s
    }

    /// Smallest stable subspace containing `self` and `v`, assuming `self` is stable.
    pub fn with_cyclic(&self, map: &FqMap<'_>, v: &[Code]) -> Self {
        let mut s = self.clone();
        let mut cur = v.to_vec();
        while s.insert(map.gf, &cur) {
            cur = map.apply(&cur);
        }
        s
    }

    /// Coordinates not carrying a pivot.
    fn free_coordinates(&self, n: usize) -> Vec<usize> {
        let piv: BTreeSet<usize> = self.rows.iter().filter_map(|r| pivot(r)).collect();
        (0..n).filter(|i| !piv.contains(i)).collect()
    }
}

/// Vectors supported on `coords` whose first nonzero entry is 1.
fn projective_points(gf: &Gf, n: usize, coords: &[usize]) -> Vec<FqVec> {
    let q = gf.order();
    let k = coords.len();
    let mut out = Vec::new();
    for lead in 0..k {
        let tail = k - lead - 1;
        for idx in 0..q.pow(tail as u32) {
            let mut v = vec![0; n];
            v[coords[lead]] = 1;
            let mut r = idx;
            for &c in &coords[lead + 1..] {
                v[c] = (r % q) as Code;
                r /= q;
            }
            out.push(v);
        }
    }
    out
}

/// All `map`-stable subspaces of `F_Q^n` containing the stable subspace `base`.
pub(crate) fn stable_subspaces(map: &FqMap<'_>, n: usize, base: Subspace) -> Vec<Subspace> {
    let mut seen: BTreeSet<Subspace> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(base.clone());
    queue.push_back(base);
    while let Some(w) = queue.pop_front() {
        if w.dim() == n {
            continue;
        }
        for v in projective_points(map.gf, n, &w.free_coordinates(n)) {
            let next = w.with_cyclic(map, &v);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.into_iter().collect()
}
