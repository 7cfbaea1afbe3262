//! Univariate polynomials over `F` (or `E`) with Laurent-element coefficients.

use std::fmt;

use crate::error::{Error, Result};
use crate::localfield::{Gf, LocalElement, Matrix};

/// Polynomial with coefficients constant term first; trailing exact zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    gf: &'static Gf,
    coeffs: Vec<LocalElement>,
}

impl Poly {
    pub fn new(gf: &'static Gf, mut coeffs: Vec<LocalElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero() && c.is_exact()) {
            coeffs.pop();
        }
        Poly { gf, coeffs }
    }

    pub fn zero(gf: &'static Gf) -> Self {
        Poly {
            gf,
            coeffs: Vec::new(),
        }
    }

    pub fn one(gf: &'static Gf) -> Self {
        Poly::new(gf, vec![LocalElement::one(gf)])
    }

    /// `T`
    pub fn var(gf: &'static Gf) -> Self {
        Poly::new(gf, vec![LocalElement::zero(gf), LocalElement::one(gf)])
    }

    pub fn constant(c: LocalElement) -> Self {
        let gf = c.field();
        Poly::new(gf, vec![c])
    }

    /// `T - a`
    pub fn linear(a: &LocalElement) -> Self {
        let gf = a.field();
        Poly::new(gf, vec![-a, LocalElement::one(gf)])
    }

    /// Product of the linear factors `T - a_i`.
    pub fn from_roots(gf: &'static Gf, roots: &[LocalElement]) -> Self {
        roots
            .iter()
            .fold(Poly::one(gf), |acc, r| acc.mul(&Poly::linear(r)))
    }

    pub fn field(&self) -> &'static Gf {
        self.gf
    }

    pub fn coeffs(&self) -> &[LocalElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> LocalElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| LocalElement::zero(self.gf))
    }

    pub fn degree(&self) -> Option<usize> {
        (!self.coeffs.is_empty()).then(|| self.coeffs.len() - 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs
            .last()
            .is_some_and(|c| *c == LocalElement::one(self.gf))
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            self.gf,
            (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            self.gf,
            (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.gf);
        }
        let mut out = vec![LocalElement::zero(self.gf); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.gf, out)
    }

    pub fn scale(&self, c: &LocalElement) -> Poly {
        Poly::new(self.gf, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn map_coeffs(&self, f: impl Fn(&LocalElement) -> LocalElement) -> Poly {
        let coeffs: Vec<LocalElement> = self.coeffs.iter().map(f).collect();
        let gf = coeffs.first().map_or(self.gf, |c| c.field());
        Poly::new(gf, coeffs)
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &LocalElement::from_int(self.gf, i as i64))
            .collect();
        Poly::new(self.gf, coeffs)
    }

    pub fn eval(&self, x: &LocalElement) -> LocalElement {
        self.coeffs
            .iter()
            .rev()
            .fold(LocalElement::zero(self.gf), |acc, c| &(&acc * x) + c)
    }

    /// Evaluates at a square matrix by Horner's rule.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut acc = Matrix::zeros(self.gf, n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add(&Matrix::scalar(self.gf, n, c));
        }
        acc
    }

    /// Division with remainder by a monic divisor.
    pub fn divrem_monic(&self, d: &Poly) -> (Poly, Poly) {
        assert!(d.is_monic(), "divisor must be monic");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Poly::zero(self.gf), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![LocalElement::zero(self.gf); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i].clone();
            quot[i - dd] = c.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] = &rem[i - dd + j] - &(&c * dc);
            }
        }
        rem.truncate(dd);
        (Poly::new(self.gf, quot), Poly::new(self.gf, rem))
    }

    /// `P(c * (T + r))`.
    pub fn substitute_affine(&self, c: &LocalElement, r: &LocalElement) -> Poly {
        let inner = Poly::new(self.gf, vec![c * r, c.clone()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(self.gf), |acc, a| {
                acc.mul(&inner).add(&Poly::constant(a.clone()))
            })
    }

    /// `c^{-deg} P(c T)` for a monomial `c`; keeps monic polynomials monic.
    pub fn rescale_monic(&self, c: &LocalElement) -> Result<Poly> {
        let n = self.degree().unwrap_or(0) as u32;
        let cinv = c.inv(1)?;
        let mut pw = LocalElement::one(self.gf);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw = &pw * c;
        }
        let norm = cinv.pow(n);
        Ok(Poly::new(self.gf, out.iter().map(|a| a * &norm).collect()))
    }

    /// `T^n P(1/T)` divided by its new leading coefficient.
    pub fn reversal_monic(&self, rel_prec: i64) -> Result<Poly> {
        let mut c = self.coeffs.clone();
        c.reverse();
        let lead = c.last().cloned().ok_or(Error::ZeroValuation)?;
        let inv = lead.inv(rel_prec)?;
        Ok(Poly::new(self.gf, c.iter().map(|a| a * &inv).collect()))
    }

    /// Resultant via the Sylvester determinant (division-free, exact on exact input).
    pub fn resultant(&self, other: &Poly) -> LocalElement {
        let (m, n) = match (self.degree(), other.degree()) {
            (Some(m), Some(n)) => (m, n),
            _ => return LocalElement::zero(self.gf),
        };
        if m + n == 0 {
            return LocalElement::one(self.gf);
        }
        let size = m + n;
        let mut s = Matrix::zeros(self.gf, size, size);
        for r in 0..n {
            for (i, c) in self.coeffs.iter().rev().enumerate() {
                s.set(r, r + i, c.clone());
            }
        }
        for r in 0..m {
            for (i, c) in other.coeffs.iter().rev().enumerate() {
                s.set(n + r, r + i, c.clone());
            }
        }
        s.det()
    }

    pub fn discriminant_resultant(&self) -> LocalElement {
        self.resultant(&self.derivative())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integral())
    }

    pub fn to_quadratic(&self) -> Poly {
        self.map_coeffs(|c| c.to_quadratic())
    }

    pub fn to_base(&self) -> Result<Poly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.to_base())
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(self.gf.prime_field(), coeffs))
    }

    pub fn truncate(&self, n: i64) -> Poly {
        self.map_coeffs(|c| c.truncate(n))
    }

    pub fn drop_from(&self, n: i64) -> Poly {
        self.map_coeffs(|c| c.drop_from(n))
    }

    /// Coefficient strings, constant term first.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && c.is_exact() {
                continue;
            }
            let cs = c.to_string();
            let single = c.terms().count() == 1 && c.is_exact();
            let cs = if single { cs } else { format!("({cs})") };
            parts.push(match (i, cs.as_str()) {
                (0, _) => cs.clone(),
                (1, "1") => "T".to_string(),
                (_, "1") => format!("T^{i}"),
                (1, _) => format!("{cs}*T"),
                _ => format!("{cs}*T^{i}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A monic polynomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonicPoly(Poly);

impl MonicPoly {
    pub fn new(p: Poly) -> Result<Self> {
        if !p.is_monic() {
            return Err(Error::NotRegular(format!("polynomial {p} is not monic")));
        }
        Ok(MonicPoly(p))
    }

    pub fn from_coeffs(gf: &'static Gf, coeffs: Vec<LocalElement>) -> Result<Self> {
        Self::new(Poly::new(gf, coeffs))
    }

    pub fn from_roots(gf: &'static Gf, roots: &[LocalElement]) -> Self {
        MonicPoly(Poly::from_roots(gf, roots))
    }

    pub fn poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_poly(self) -> Poly {
        self.0
    }

    pub fn degree(&self) -> usize {
        self.0.degree().unwrap_or(0)
    }

    pub fn field(&self) -> &'static Gf {
        self.0.field()
    }

    pub fn coeff(&self, i: usize) -> LocalElement {
        self.0.coeff(i)
    }

    pub fn mul(&self, other: &MonicPoly) -> MonicPoly {
        MonicPoly(self.0.mul(&other.0))
    }

    /// Companion matrix: ones below the diagonal, `-c_i` in the last column.
    pub fn companion(&self) -> Matrix {
        let gf = self.field();
        let n = self.degree();
        let mut m = Matrix::zeros(gf, n, n);
        for i in 0..n {
            if i + 1 < n {
                m.set(i + 1, i, LocalElement::one(gf));
            }
            m.set(i, n - 1, -self.coeff(i));
        }
        m
    }
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dense polynomials over a residue field, constant term first.
pub(crate) mod fq {
    use crate::localfield::{Code, Gf};

    pub type FqPoly = Vec<Code>;

    pub fn trim(mut p: FqPoly) -> FqPoly {
        while p.last() == Some(&0) {
            p.pop();
        }
        p
    }

    pub fn deg(p: &FqPoly) -> Option<usize> {
        (!p.is_empty()).then(|| p.len() - 1)
    }

    pub fn mul(gf: &Gf, a: &FqPoly, b: &FqPoly) -> FqPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = gf.add(out[i + j], gf.mul(x, y));
            }
        }
        trim(out)
    }

    pub fn sub(gf: &Gf, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| gf.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
                .collect(),
        )
    }

    pub fn divrem(gf: &Gf, a: &FqPoly, b: &FqPoly) -> (FqPoly, FqPoly) {
        let db = deg(b).expect("division by zero polynomial");
        let lead_inv = gf.inv(b[db]);
        let mut r = a.clone();
        if r.len() <= db {
            return (Vec::new(), trim(r));
        }
        let mut q = vec![0; r.len() - db];
        for i in (db..r.len()).rev() {
            let c = gf.mul(r[i], lead_inv);
            q[i - db] = c;
            if c == 0 {
                continue;
            }
            for (j, &bc) in b.iter().enumerate() {
                r[i - db + j] = gf.sub(r[i - db + j], gf.mul(c, bc));
            }
        }
        r.truncate(db);
        (trim(q), trim(r))
    }

    pub fn monic(gf: &Gf, a: &FqPoly) -> FqPoly {
        let l = gf.inv(*a.last().expect("nonzero"));
        a.iter().map(|&c| gf.mul(c, l)).collect()
    }

    /// Extended gcd: returns (g, s, t) with s a + t b = g, g monic.
    pub fn xgcd(gf: &Gf, a: &FqPoly, b: &FqPoly) -> (FqPoly, FqPoly, FqPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1): (FqPoly, FqPoly) = (vec![1], Vec::new());
        let (mut t0, mut t1): (FqPoly, FqPoly) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = divrem(gf, &r0, &r1);
            let s2 = sub(gf, &s0, &mul(gf, &q, &s1));
            let t2 = sub(gf, &t0, &mul(gf, &q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let l = gf.inv(*r0.last().expect("gcd of zero polynomials"));
        let sc = |p: &FqPoly| trim(p.iter().map(|&c| gf.mul(c, l)).collect());
        (sc(&r0), sc(&s0), sc(&t0))
    }

    fn monic_polys_of_degree(gf: &Gf, d: usize) -> impl Iterator<Item = FqPoly> + '_ {
        let q = gf.order();
        let count = q.pow(d as u32);
        (0..count).map(move |mut idx| {
            let mut p = Vec::with_capacity(d + 1);
            for _ in 0..d {
                p.push((idx % q) as Code);
                idx /= q;
            }
            p.push(1);
            p
        })
    }

    /// Factors a nonzero polynomial into monic irreducibles with multiplicities.
    pub fn factor(gf: &Gf, a: &FqPoly) -> Vec<(FqPoly, usize)> {
        let mut rest = monic(gf, a);
        let mut out = Vec::new();
        let mut d = 1;
        while deg(&rest).unwrap_or(0) >= 2 * d {
            let cands: Vec<FqPoly> = monic_polys_of_degree(gf, d).collect();
            for f in cands {
                let mut k = 0;
                loop {
                    let (q, r) = divrem(gf, &rest, &f);
                    if !r.is_empty() {
                        break;
                    }
                    rest = q;
                    k += 1;
                }
                if k > 0 {
                    out.push((f, k));
                }
            }
            d += 1;
        }
        if deg(&rest).unwrap_or(0) >= 1 {
            // what survives trial division is irreducible, possibly merging with an equal factor
            if let Some(entry) = out.iter_mut().find(|(f, _)| *f == rest) {
                entry.1 += 1;
            } else {
                out.push((rest, 1));
            }
        }
        out
    }
}
