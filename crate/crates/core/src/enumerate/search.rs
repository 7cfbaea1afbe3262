//! Windowed breadth-first search over normalized lattice representatives.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::subspace::{stable_subspaces, FqMap, FqVec, Subspace};
use super::torus::{charpoly_over, torus_data_over, TorusData};
use crate::error::{Error, Result};
use crate::lattice::{canonicalize, LatticeBasis, LatticePair};
use crate::localfield::{LocalElement, Matrix, DEFAULT_PRECISION};

/// Tuning for the enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    /// Working precision of the torus idempotents.
    pub precision: i64,
    /// Initial window; derived from the discriminant when absent.
    pub window: Option<i64>,
    /// How far the window may grow before giving up.
    pub max_growth: i64,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            precision: DEFAULT_PRECISION,
            window: None,
            max_growth: 6,
        }
    }
}

/// Representative counts at the final window and the next one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub window: i64,
    pub count: usize,
    pub count_next: usize,
}

/// Representatives of lattices modulo `Γ' = ⟨t on each factor⟩`.
///
/// Each `Γ`-class splits into exactly `gamma_index` representatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitList<T> {
    pub representatives: Vec<T>,
    pub window: i64,
    pub certificate: Certificate,
    pub gamma_index: u64,
}

impl<T> OrbitList<T> {
    fn empty() -> Self {
        OrbitList {
            representatives: Vec::new(),
            window: 0,
            certificate: Certificate {
                window: 0,
                count: 0,
                count_next: 0,
            },
            gamma_index: 1,
        }
    }

    /// Number of `Γ`-classes.
    pub fn class_count(&self) -> u64 {
        let n = self.representatives.len() as u64;
        assert_eq!(
            n % self.gamma_index,
            0,
            "representative count not divisible by [Γ:Γ']"
        );
        n / self.gamma_index
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    /// `x Λ ⊆ Λ`
    Linear,
    /// `x σ(Λ) ⊆ Λ`
    Sigma,
}

/// The problem rewritten in a basis of a lattice `Λ_0` in the family.
pub(crate) struct Frame {
    pub mode: Mode,
    /// `x` in the basis of `Λ_0`.
    pub x: Matrix,
    /// Basis of `Λ_0`.
    pub b0: Matrix,
    pub torus: TorusData,
    pub window: i64,
}

fn inverse_of_canonical(l: &LatticeBasis) -> Matrix {
    let gf = l.field();
    let n = l.rank();
    let cols: Vec<Vec<LocalElement>> = (0..n)
        .map(|i| {
            let mut e = vec![LocalElement::zero(gf); n];
            e[i] = LocalElement::one(gf);
            l.coordinates(&e)
        })
        .collect();
    Matrix::from_columns(gf, n, &cols)
}

impl Frame {
    /// `None` when no lattice satisfies the condition.
    pub fn new(x: &Matrix, mode: Mode, cfg: &EnumConfig) -> Result<Option<Frame>> {
        if !x.is_square() {
            return Err(Error::DimensionMismatch("expected a square matrix".into()));
        }
        let n = x.rows();
        let gf = x.field();
        if mode == Mode::Sigma && gf.degree() != 2 {
            return Err(Error::WrongField(
                "semilinear condition needs a matrix over E".into(),
            ));
        }
        if x.det().is_zero() {
            return Err(Error::NotRegular("singular matrix".into()));
        }
        let y = match mode {
            Mode::Linear => x.clone(),
            Mode::Sigma => x.mul(&x.sigma()?),
        };
        let cp = charpoly_over(&y, mode == Mode::Sigma)?;
        if !cp.poly().is_integral() {
            return Ok(None);
        }
        let mut gens = Vec::new();
        let mut power = Matrix::identity(gf, n);
        for _ in 0..n {
            gens.extend(power.columns());
            if mode == Mode::Sigma {
                gens.extend(power.mul(x).columns());
            }
            power = power.mul(&y);
        }
        let l0 = canonicalize(&gens)?;
        let b0 = l0.basis().clone();
        let b0inv = inverse_of_canonical(&l0);
        let xp = match mode {
            Mode::Linear => b0inv.mul(x).mul(&b0),
            Mode::Sigma => b0inv.mul(x).mul(&b0.sigma()?),
        };
        debug_assert!(xp.is_integral());
        let yp = match mode {
            Mode::Linear => xp.clone(),
            Mode::Sigma => xp.mul(&xp.sigma()?),
        };
        let disc = cp.poly().discriminant_resultant();
        if disc.is_zero() {
            return Err(Error::NotSeparable);
        }
        let disc = disc.valuation()?;
        let window = cfg.window.unwrap_or(disc.max(1) + n as i64);
        let prec = cfg
            .precision
            .max(6 * (window + cfg.max_growth) + 2 * disc + 24);
        let torus = torus_data_over(&yp, mode == Mode::Sigma, prec)?;
        Ok(Some(Frame {
            mode,
            x: xp,
            b0,
            torus,
            window,
        }))
    }

    fn rank(&self) -> usize {
        self.x.rows()
    }

    /// The image `x L` (or `x σ(L)`).
    pub fn image(&self, l: &LatticeBasis) -> Result<LatticeBasis> {
        match self.mode {
            Mode::Linear => l.apply(&self.x),
            Mode::Sigma => l.sigma()?.apply(&self.x),
        }
    }

    /// Matrix of `x` acting on `L / tL` in the canonical basis of `L`.
    fn reduction(&self, l: &LatticeBasis) -> Vec<FqVec> {
        let n = self.rank();
        let mut rows = vec![vec![0; n]; n];
        for (j, b) in l.columns().iter().enumerate() {
            let img = match self.mode {
                Mode::Linear => self.x.mul_vec(b),
                Mode::Sigma => self
                    .x
                    .mul_vec(&b.iter().map(|e| e.sigma_unchecked()).collect::<Vec<_>>()),
            };
            let c = l.coordinates(&img);
            debug_assert!(c.iter().all(|e| e.is_integral()), "lattice is not stable");
            for (i, e) in c.iter().enumerate() {
                rows[i][j] = e.coeff(0);
            }
        }
        rows
    }

    /// Proper stable lattices `tL ⊊ M ⊊ L` other than `tL` itself, normalized.
    fn children(&self, l: &LatticeBasis) -> Result<Vec<LatticeBasis>> {
        let n = self.rank();
        let gf = l.field();
        let mat = self.reduction(l);
        let map = FqMap {
            gf,
            mat: &mat,
            semilinear: self.mode == Mode::Sigma,
        };
        let subs = stable_subspaces(&map, n, Subspace::zero());
        subs.iter()
            .filter(|w| w.dim() > 0 && w.dim() < n)
            .map(|w| self.torus.normalize(&lift_subspace(l, w)?))
            .collect()
    }

    fn in_window(&self, l: &LatticeBasis, m: i64) -> bool {
        l.floor() <= m && l.ceiling() >= -m
    }

    /// All normalized stable lattices reachable inside the window `m`.
    fn search(&self, m: i64) -> Result<BTreeSet<LatticeBasis>> {
        let gf = self.x.field();
        let start = self
            .torus
            .normalize(&LatticeBasis::standard(gf, self.rank()))?;
        let mut seen = BTreeSet::new();
        seen.insert(start.clone());
        let mut frontier = vec![start];
        while !frontier.is_empty() {
            let found: Vec<Vec<LatticeBasis>> = frontier
                .par_iter()
                .map(|l| self.children(l))
                .collect::<Result<_>>()?;
            let mut next = BTreeSet::new();
            for c in found.into_iter().flatten() {
                if self.in_window(&c, m) && !seen.contains(&c) {
                    next.insert(c);
                }
            }
            seen.extend(next.iter().cloned());
            frontier = next.into_iter().collect();
        }
        Ok(seen)
    }

    /// Stable representatives in `Λ_0` coordinates with the window certificate.
    pub fn stable(&self, cfg: &EnumConfig) -> Result<(Vec<LatticeBasis>, Certificate)> {
        let mut m = self.window;
        let mut cur = self.search(m)?;
        loop {
            let next = self.search(m + 1)?;
            if next == cur {
                let cert = Certificate {
                    window: m,
                    count: cur.len(),
                    count_next: next.len(),
                };
                return Ok((cur.into_iter().collect(), cert));
            }
            if m >= self.window + cfg.max_growth {
                return Err(Error::WindowUnstable(m));
            }
            m += 1;
            cur = next;
        }
    }

    /// Lattices `M` with `sub ⊆ M ⊆ top`.
    pub fn intermediate(
        &self,
        top: &LatticeBasis,
        sub: &LatticeBasis,
    ) -> Result<Vec<LatticeBasis>> {
        let n = self.rank();
        let gf = top.field();
        let zero = vec![vec![0; n]; n];
        let mut seen = BTreeSet::new();
        seen.insert(top.clone());
        let mut frontier = vec![top.clone()];
        while !frontier.is_empty() {
            let mut next = BTreeSet::new();
            for l in &frontier {
                let image: Vec<FqVec> = sub
                    .columns()
                    .iter()
                    .map(|v| l.coordinates(v).iter().map(|c| c.coeff(0)).collect())
                    .collect();
                let base = Subspace::span(gf, &image);
                let map = FqMap {
                    gf,
                    mat: &zero,
                    semilinear: false,
                };
                for w in stable_subspaces(&map, n, base) {
                    if w.dim() < n {
                        let c = lift_subspace(l, &w)?;
                        if !seen.contains(&c) {
                            next.insert(c);
                        }
                    }
                }
            }
            seen.extend(next.iter().cloned());
            frontier = next.into_iter().collect();
        }
        Ok(seen.into_iter().collect())
    }

    pub fn to_original(&self, l: &LatticeBasis) -> Result<LatticeBasis> {
        l.apply(&self.b0)
    }
}

/// `tL + span(lift of W)`.
fn lift_subspace(l: &LatticeBasis, w: &Subspace) -> Result<LatticeBasis> {
    let gf = l.field();
    let cols = l.columns();
    let n = cols.len();
    let mut gens: Vec<Vec<LocalElement>> = cols
        .iter()
        .map(|c| c.iter().map(|e| e.shift(1)).collect())
        .collect();
    for row in &w.rows {
        let mut v = vec![LocalElement::zero(gf); n];
        for (k, &a) in row.iter().enumerate() {
            if a != 0 {
                let ak = LocalElement::constant(gf, a);
                for (vi, ci) in v.iter_mut().zip(&cols[k]) {
                    *vi = &*vi + &(&ak * ci);
                }
            }
        }
        gens.push(v);
    }
    LatticeBasis::with_floor(&gens, l.floor() + 1)
}

fn finish<T>(reps: Vec<T>, cert: Certificate, torus: &TorusData) -> OrbitList<T> {
    OrbitList {
        representatives: reps,
        window: cert.window,
        certificate: cert,
        gamma_index: torus.gamma_index(),
    }
}

/// Representatives of `{Λ : xΛ ⊆ Λ}` modulo `Γ'`.
pub fn enum_stable_with(x: &Matrix, cfg: &EnumConfig) -> Result<OrbitList<LatticeBasis>> {
    let Some(frame) = Frame::new(x, Mode::Linear, cfg)? else {
        return Ok(OrbitList::empty());
    };
    let (reps, cert) = frame.stable(cfg)?;
    let reps = reps
        .iter()
        .map(|l| frame.to_original(l))
        .collect::<Result<Vec<_>>>()?;
    Ok(finish(reps, cert, &frame.torus))
}

pub fn enum_stable(x: &Matrix) -> Result<OrbitList<LatticeBasis>> {
    enum_stable_with(x, &EnumConfig::default())
}

/// Representatives of `{Λ : xσ(Λ) ⊆ Λ}` modulo `Γ'`, for `x` over `E`.
pub fn enum_sigma_with(x: &Matrix, cfg: &EnumConfig) -> Result<OrbitList<LatticeBasis>> {
    let Some(frame) = Frame::new(x, Mode::Sigma, cfg)? else {
        return Ok(OrbitList::empty());
    };
    let (reps, cert) = frame.stable(cfg)?;
    let reps = reps
        .iter()
        .map(|l| frame.to_original(l))
        .collect::<Result<Vec<_>>>()?;
    Ok(finish(reps, cert, &frame.torus))
}

pub fn enum_sigma(x: &Matrix) -> Result<OrbitList<LatticeBasis>> {
    enum_sigma_with(x, &EnumConfig::default())
}

/// Representatives of `{Λ : xσ(Λ) = Λ}` modulo `Γ'`.
pub fn enum_sigma_fixed_with(x: &Matrix, cfg: &EnumConfig) -> Result<OrbitList<LatticeBasis>> {
    let Some(frame) = Frame::new(x, Mode::Sigma, cfg)? else {
        return Ok(OrbitList::empty());
    };
    let (reps, mut cert) = frame.stable(cfg)?;
    let mut kept = Vec::new();
    for l in &reps {
        if frame.image(l)? == *l {
            kept.push(frame.to_original(l)?);
        }
    }
    cert.count = kept.len();
    cert.count_next = kept.len();
    Ok(finish(kept, cert, &frame.torus))
}

/// Representatives of pairs `xΛ_- ⊆ Λ_+ ⊆ Λ_-` modulo `Γ'`, for `x` over `F`.
pub fn enum_pairs_with(x: &Matrix, cfg: &EnumConfig) -> Result<OrbitList<LatticePair>> {
    if x.field().degree() != 1 {
        return Err(Error::WrongField(
            "lattice pairs need a matrix over F".into(),
        ));
    }
    let Some(frame) = Frame::new(x, Mode::Linear, cfg)? else {
        return Ok(OrbitList::empty());
    };
    let (minus, mut cert) = frame.stable(cfg)?;
    let per: Vec<Vec<LatticePair>> = minus
        .par_iter()
        .map(|lm| {
            let sub = frame.image(lm)?;
            let lm0 = frame.to_original(lm)?;
            frame
                .intermediate(lm, &sub)?
                .iter()
                .map(|lp| LatticePair::new(frame.to_original(lp)?, lm0.clone()))
                .collect()
        })
        .collect::<Result<_>>()?;
    let pairs: Vec<LatticePair> = per.into_iter().flatten().collect();
    cert.count = pairs.len();
    cert.count_next = pairs.len();
    Ok(finish(pairs, cert, &frame.torus))
}

pub fn enum_pairs(x: &Matrix) -> Result<OrbitList<LatticePair>> {
    enum_pairs_with(x, &EnumConfig::default())
}
