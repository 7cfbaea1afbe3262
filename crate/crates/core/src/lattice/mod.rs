//! Full-rank lattices over `O_F` and `O_E` in Hermite normal form.
//!
//! A lattice is stored by its canonical basis: an upper triangular matrix
//! whose column `j` has the monomial `t^{d_j}` in row `j`, and whose entries
//! to the right of a pivot only involve exponents below `d_j`.

use std::cmp::Ordering;
use std::fmt;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::localfield::{FieldTag, Gf, LocalElement, Matrix};

type Vector = Vec<LocalElement>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeBasis {
    basis: Matrix,
}

/// The pair `(Λ+, Λ-)` of lattices in `F^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePair {
    pub plus: LatticeBasis,
    pub minus: LatticeBasis,
}

fn min_valuation(v: &[LocalElement]) -> Option<i64> {
    v.iter()
        .filter(|e| !e.is_zero())
        .map(|e| e.valuation_or_bound())
        .min()
}

fn axpy(y: &[LocalElement], a: &LocalElement, x: &[LocalElement], floor: i64) -> Vector {
    y.iter()
        .zip(x)
        .map(|(yi, xi)| (yi - &(a * xi)).drop_from(floor))
        .collect()
}

/// Hermite reduction of generators of a lattice known to contain `t^floor O^n`.
fn hermite(gf: &'static Gf, n: usize, gens: &[Vector], floor: i64) -> Result<Matrix> {
    let mut cols: Vec<Vector> = Vec::with_capacity(gens.len() + n);
    for g in gens {
        if g.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "generator of length {} in rank {n}",
                g.len()
            )));
        }
        if let Some(e) = g.iter().find(|e| e.precision().is_some_and(|p| p < floor)) {
            return Err(Error::InsufficientPrecision(format!(
                "generator entry {e} is not known modulo t^{floor}"
            )));
        }
        let v: Vector = g.iter().map(|e| e.drop_from(floor)).collect();
        if v.iter().any(|e| !e.is_zero()) {
            cols.push(v);
        }
    }
    for i in 0..n {
        let mut e = vec![LocalElement::zero(gf); n];
        e[i] = LocalElement::t_pow(gf, floor);
        cols.push(e);
    }
    let mut pivots: Vec<Option<Vector>> = vec![None; n];
    for r in (0..n).rev() {
        let (pi, _) = cols
            .iter()
            .enumerate()
            .filter(|(_, c)| !c[r].is_zero())
            .min_by_key(|(_, c)| c[r].valuation_or_bound())
            .ok_or(Error::RankDeficient)?;
        let mut piv = cols.swap_remove(pi);
        let d = piv[r].valuation()?;
        if !piv[r].is_monomial() || piv[r].leading_coefficient() != Some(1) {
            let m = min_valuation(&piv[..=r]).unwrap_or(d);
            let u = piv[r].shift(-d).inv(floor - m)?;
            piv = piv.iter().map(|e| (e * &u).drop_from(floor)).collect();
        }
        debug_assert_eq!(piv[r], LocalElement::t_pow(gf, d));
        for c in cols.iter_mut() {
            if c[r].is_zero() {
                continue;
            }
            let q = c[r].shift(-d);
            *c = axpy(c, &q, &piv, floor);
        }
        cols.retain(|c| c.iter().any(|e| !e.is_zero()));
        pivots[r] = Some(piv);
    }
    let mut b: Vec<Vector> = pivots
        .into_iter()
        .map(|p| p.expect("pivot per row"))
        .collect();
    // reduce entries right of each pivot modulo the pivot power
    for k in 0..n {
        for j in (0..k).rev() {
            let d = b[j][j].valuation()?;
            let (_, high) = b[k][j].split_at(d);
            if high.is_zero() {
                continue;
            }
            let q = high.shift(-d);
            let pj = b[j].clone();
            b[k] = axpy(&b[k], &q, &pj, floor);
        }
    }
    Ok(Matrix::from_columns(gf, n, &b))
}

/// A valid `floor` for the span of the generators, or `RankDeficient`.
fn floor_bound(n: usize, gens: &[Vector]) -> Result<i64> {
    let gf = gens
        .first()
        .map(|g| g[0].field())
        .ok_or(Error::RankDeficient)?;
    let mut best: Option<i64> = None;
    let m = gens.len();
    if m < n {
        return Err(Error::RankDeficient);
    }
    let mut idx: Vec<usize> = (0..n).collect();
    let mut tried = 0;
    loop {
        let sel: Vec<Vector> = idx.iter().map(|&i| gens[i].clone()).collect();
        let mat = Matrix::from_columns(gf, n, &sel);
        let det = mat.det();
        if !det.is_zero() {
            let mv = mat.min_valuation().unwrap_or(0);
            let bound = det.valuation()? - (n as i64 - 1) * mv.min(0);
            best = Some(best.map_or(bound, |b: i64| b.min(bound)));
        }
        tried += 1;
        if tried > 4096 || !next_combination(&mut idx, m) {
            break;
        }
    }
    best.ok_or(Error::RankDeficient)
}

fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < m - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Canonical basis of the `O`-span of `generators`, which must span the ambient space.
pub fn canonicalize(generators: &[Vec<LocalElement>]) -> Result<LatticeBasis> {
    let n = generators
        .first()
        .map(|g| g.len())
        .ok_or(Error::RankDeficient)?;
    let floor = floor_bound(n, generators)?;
    LatticeBasis::with_floor(generators, floor)
}

pub fn index(l1: &LatticeBasis, l2: &LatticeBasis) -> Result<i64> {
    l1.index_of(l2)
}

pub fn apply(m: &Matrix, l: &LatticeBasis) -> Result<LatticeBasis> {
    l.apply(m)
}

pub fn conj_lattice(l: &LatticeBasis) -> Result<LatticeBasis> {
    l.sigma()
}

pub fn contains(l1: &LatticeBasis, l2: &LatticeBasis) -> bool {
    l1.contains(l2)
}

impl LatticeBasis {
    /// `O^n`
    pub fn standard(gf: &'static Gf, n: usize) -> Self {
        LatticeBasis {
            basis: Matrix::identity(gf, n),
        }
    }

    /// Canonical form of the span of `generators` together with `t^floor O^n`.
    ///
    /// Entries at exponent `>= floor` are discarded, so the result is the
    /// span of the generators whenever that span contains `t^floor O^n`.
    pub fn with_floor(generators: &[Vec<LocalElement>], floor: i64) -> Result<Self> {
        let first = generators.first().ok_or(Error::RankDeficient)?;
        let n = first.len();
        let gf = first.first().ok_or(Error::RankDeficient)?.field();
        Ok(LatticeBasis {
            basis: hermite(gf, n, generators, floor)?,
        })
    }

    /// Lattice with basis the columns of `m`.
    pub fn from_basis_matrix(m: &Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(
                "basis matrix must be square".into(),
            ));
        }
        canonicalize(&m.columns())
    }

    pub fn field(&self) -> &'static Gf {
        self.basis.field()
    }

    pub fn tag(&self) -> FieldTag {
        if self.field().degree() == 2 {
            FieldTag::Quadratic
        } else {
            FieldTag::Base
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn columns(&self) -> Vec<Vector> {
        self.basis.columns()
    }

    /// Pivot exponents `d_j`.
    pub fn pivot_exponents(&self) -> Vec<i64> {
        (0..self.rank())
            .map(|j| self.basis.get(j, j).valuation().expect("nonzero pivot"))
            .collect()
    }

    /// `v(det)` of the basis; the index `[O^n : L]` when `L ⊆ O^n`.
    pub fn volume(&self) -> i64 {
        self.pivot_exponents().iter().sum()
    }

    /// Coordinates of `v` in the canonical basis (exact back substitution).
    pub fn coordinates(&self, v: &[LocalElement]) -> Vector {
        let n = self.rank();
        let mut c = vec![LocalElement::zero(self.field()); n];
        for j in (0..n).rev() {
            let mut s = v[j].clone();
            for (k, ck) in c.iter().enumerate().skip(j + 1) {
                s = &s - &(self.basis.get(j, k) * ck);
            }
            let d = self.basis.get(j, j).valuation().expect("nonzero pivot");
            c[j] = s.shift(-d);
        }
        c
    }

    pub fn contains_vector(&self, v: &[LocalElement]) -> bool {
        self.coordinates(v).iter().all(|c| c.is_integral())
    }

    pub fn contains(&self, other: &LatticeBasis) -> bool {
        other.columns().iter().all(|v| self.contains_vector(v))
    }

    /// Smallest `N` with `t^N O^n` contained in the lattice.
    pub fn floor(&self) -> i64 {
        let gf = self.field();
        let n = self.rank();
        (0..n)
            .map(|i| {
                let mut e = vec![LocalElement::zero(gf); n];
                e[i] = LocalElement::one(gf);
                -min_valuation(&self.coordinates(&e)).unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    /// Smallest `N` with the lattice contained in `t^N O^n`.
    pub fn ceiling(&self) -> i64 {
        self.basis.min_valuation().unwrap_or(0)
    }

    /// Length of `self / other` for `other ⊆ self`.
    pub fn index_of(&self, other: &LatticeBasis) -> Result<i64> {
        if !self.contains(other) {
            return Err(Error::NotContained);
        }
        Ok(other.volume() - self.volume())
    }

    /// `t^k L`
    pub fn scale_t(&self, k: i64) -> Self {
        LatticeBasis {
            basis: self.basis.map(|e| e.shift(k)),
        }
    }

    /// Canonical basis of `M L`.
    pub fn apply(&self, m: &Matrix) -> Result<Self> {
        let n = self.rank();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix on rank {n}",
                m.rows(),
                m.cols()
            )));
        }
        let det = m.det();
        if det.is_zero() {
            return Err(Error::RankDeficient);
        }
        let mv = m.min_valuation().unwrap_or(0);
        let floor = self.floor() - (n as i64 - 1) * mv + det.valuation()?;
        let image = m.mul(&self.basis);
        Self::with_floor(&image.columns(), floor)
    }

    /// `σ(L)` for a lattice over `O_E`.
    pub fn sigma(&self) -> Result<Self> {
        // entrywise σ keeps pivots and reduced entries in place
        Ok(LatticeBasis {
            basis: self.basis.sigma()?,
        })
    }

    /// `L + L'`
    pub fn sum(&self, other: &LatticeBasis) -> Result<Self> {
        let mut gens = self.columns();
        gens.extend(other.columns());
        Self::with_floor(&gens, self.floor().min(other.floor()))
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.basis.to_strings()
    }
}

impl PartialOrd for LatticeBasis {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LatticeBasis {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.basis.entries().cmp(other.basis.entries()))
    }
}

impl fmt::Debug for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice{:?}", self.to_strings())
    }
}

impl Serialize for LatticeBasis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl Serialize for LatticePair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LatticePair", 2)?;
        st.serialize_field("plus", &self.plus)?;
        st.serialize_field("minus", &self.minus)?;
        st.end()
    }
}

impl LatticePair {
    pub fn new(plus: LatticeBasis, minus: LatticeBasis) -> Result<Self> {
        if plus.rank() != minus.rank() || plus.field() != minus.field() {
            return Err(Error::DimensionMismatch(
                "pair components differ in rank or field".into(),
            ));
        }
        Ok(LatticePair { plus, minus })
    }

    /// `[Λ- : Λ+]` when `Λ+ ⊆ Λ-`.
    pub fn relative_index(&self) -> Result<i64> {
        self.minus.index_of(&self.plus)
    }
}

#[cfg(test)]
mod tests;
