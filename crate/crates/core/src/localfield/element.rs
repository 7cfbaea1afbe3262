//! Laurent elements of `F = F_q((t))` and `E = F_{q^2}((t))`.

use std::cmp::{max, min, Ordering};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use super::gf::{Code, Gf};
use crate::error::{Error, Result};

/// Which of the two local fields an element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldTag {
    /// `F = F_q((t))`
    Base,
    /// `E = F_{q^2}((t))`
    Quadratic,
}

/// A finitely supported Laurent element, exact or known modulo `t^prec`.
#[derive(Clone)]
pub struct LocalElement {
    gf: &'static Gf,
    low: i64,
    coeffs: Vec<Code>,
    prec: Option<i64>,
}

impl LocalElement {
    pub fn zero(gf: &'static Gf) -> Self {
        LocalElement {
            gf,
            low: 0,
            coeffs: Vec::new(),
            prec: None,
        }
    }

    pub fn one(gf: &'static Gf) -> Self {
        Self::constant(gf, 1)
    }

    pub fn constant(gf: &'static Gf, c: Code) -> Self {
        Self::monomial(gf, c, 0)
    }

    pub fn from_int(gf: &'static Gf, n: i64) -> Self {
        Self::constant(gf, gf.from_int(n))
    }

    /// `c * t^k`
    pub fn monomial(gf: &'static Gf, c: Code, k: i64) -> Self {
        if c == 0 {
            return Self::zero(gf);
        }
        LocalElement {
            gf,
            low: k,
            coeffs: vec![c],
            prec: None,
        }
    }

    /// The uniformizer power `t^k`.
    pub fn t_pow(gf: &'static Gf, k: i64) -> Self {
        Self::monomial(gf, 1, k)
    }

    /// Builds an exact element from `(exponent, coefficient)` terms; repeated exponents add up.
    pub fn from_terms(gf: &'static Gf, terms: &[(i64, Code)]) -> Self {
        let mut acc = Self::zero(gf);
        for &(k, c) in terms {
            acc = &acc + &Self::monomial(gf, c, k);
        }
        acc
    }

    /// Builds an exact element over the prime field from integer coefficients.
    pub fn from_int_terms(gf: &'static Gf, terms: &[(i64, i64)]) -> Self {
        let terms: Vec<(i64, Code)> = terms.iter().map(|&(k, c)| (k, gf.from_int(c))).collect();
        Self::from_terms(gf, &terms)
    }

    fn from_raw(gf: &'static Gf, low: i64, mut coeffs: Vec<Code>, prec: Option<i64>) -> Self {
        if let Some(p) = prec {
            let keep = (p - low).clamp(0, coeffs.len() as i64) as usize;
            coeffs.truncate(keep);
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let lead = coeffs.iter().position(|&c| c != 0).unwrap_or(coeffs.len());
        if lead == coeffs.len() {
            return LocalElement {
                gf,
                low: 0,
                coeffs: Vec::new(),
                prec,
            };
        }
        coeffs.drain(..lead);
        LocalElement {
            gf,
            low: low + lead as i64,
            coeffs,
            prec,
        }
    }

    pub fn field(&self) -> &'static Gf {
        self.gf
    }

    pub fn tag(&self) -> FieldTag {
        if self.gf.degree() == 1 {
            FieldTag::Base
        } else {
            FieldTag::Quadratic
        }
    }

    /// Absolute precision; `None` for exact elements.
    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// True when no nonzero coefficient is known (exact zero or `O(t^N)`).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn valuation(&self) -> Result<i64> {
        match (self.coeffs.is_empty(), self.prec) {
            (false, _) => Ok(self.low),
            (true, None) => Err(Error::ZeroValuation),
            (true, Some(p)) => Err(Error::InsufficientPrecision(format!(
                "no nonzero coefficient below t^{p}"
            ))),
        }
    }

    /// Valuation, or the precision bound for an inexact zero, or `i64::MAX` for exact zero.
    pub fn valuation_or_bound(&self) -> i64 {
        match (self.coeffs.is_empty(), self.prec) {
            (false, _) => self.low,
            (true, Some(p)) => p,
            (true, None) => i64::MAX,
        }
    }

    /// Highest exponent carrying a nonzero coefficient.
    pub fn degree(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn leading_coefficient(&self) -> Option<Code> {
        self.coeffs.first().copied()
    }

    pub fn coeff(&self, k: i64) -> Code {
        if k < self.low {
            return 0;
        }
        self.coeffs
            .get((k - self.low) as usize)
            .copied()
            .unwrap_or(0)
    }

    /// Nonzero `(exponent, coefficient)` terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Code)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.low + i as i64, c))
    }

    /// Forgets everything at exponent `>= n`.
    pub fn truncate(&self, n: i64) -> Self {
        let prec = Some(self.prec.map_or(n, |p| min(p, n)));
        Self::from_raw(self.gf, self.low, self.coeffs.clone(), prec)
    }

    /// Drops the terms at exponent `>= n` and keeps the result exact.
    ///
    /// Used when the dropped part is known to lie in an ambient lattice.
    pub fn drop_from(&self, n: i64) -> Self {
        let mut out = Self::from_raw(self.gf, self.low, self.coeffs.clone(), Some(n));
        out.prec = None;
        out
    }

    /// Splits into the parts with exponent `< k` and `>= k`. Precision stays on the high part.
    pub fn split_at(&self, k: i64) -> (Self, Self) {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for (e, c) in self.terms() {
            if e < k {
                lo.push((e, c));
            } else {
                hi.push((e, c));
            }
        }
        let lo = Self::from_terms(self.gf, &lo);
        let mut hi = Self::from_terms(self.gf, &hi);
        hi.prec = self.prec;
        (lo, hi)
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.coeffs.is_empty() {
            return LocalElement {
                gf: self.gf,
                low: 0,
                coeffs: Vec::new(),
                prec: self.prec.map(|p| p + k),
            };
        }
        LocalElement {
            gf: self.gf,
            low: self.low + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec.map(|p| p + k),
        }
    }

    pub fn scale(&self, c: Code) -> Self {
        let coeffs = self.coeffs.iter().map(|&x| self.gf.mul(x, c)).collect();
        Self::from_raw(self.gf, self.low, coeffs, self.prec)
    }

    fn check_same_field(&self, other: &Self) {
        assert!(
            self.gf == other.gf,
            "mixing elements of {:?} and {:?}",
            self.gf,
            other.gf
        );
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        self.check_same_field(other);
        let gf = self.gf;
        let prec = match (self.prec, other.prec) {
            (Some(a), Some(b)) => Some(min(a, b)),
            (a, None) => a,
            (None, b) => b,
        };
        if other.coeffs.is_empty() {
            return Self::from_raw(gf, self.low, self.coeffs.clone(), prec);
        }
        if self.coeffs.is_empty() {
            let o = if negate {
                other.neg_impl()
            } else {
                other.clone()
            };
            return Self::from_raw(gf, o.low, o.coeffs, prec);
        }
        let low = min(self.low, other.low);
        let high = max(
            self.low + self.coeffs.len() as i64,
            other.low + other.coeffs.len() as i64,
        );
        let high = prec.map_or(high, |p| min(p, high));
        let len = (high - low).max(0) as usize;
        let mut out = vec![0; len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let j = (self.low - low) as usize + i;
            if j < len {
                out[j] = c;
            }
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            let j = (other.low - low) as usize + i;
            if j < len {
                let c = if negate { gf.neg(c) } else { c };
                out[j] = gf.add(out[j], c);
            }
        }
        Self::from_raw(gf, low, out, prec)
    }

    fn neg_impl(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&c| self.gf.neg(c)).collect();
        LocalElement {
            gf: self.gf,
            low: self.low,
            coeffs,
            prec: self.prec,
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        self.check_same_field(other);
        let gf = self.gf;
        let va = self.valuation_or_bound();
        let vb = other.valuation_or_bound();
        let mut prec: Option<i64> = None;
        if let Some(pa) = self.prec {
            if vb != i64::MAX {
                prec = Some(pa + vb);
            } else {
                // exact zero times anything
                return Self::zero(gf);
            }
        }
        if let Some(pb) = other.prec {
            if va == i64::MAX {
                return Self::zero(gf);
            }
            prec = Some(prec.map_or(pb + va, |p| min(p, pb + va)));
        }
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return LocalElement {
                gf,
                low: 0,
                coeffs: Vec::new(),
                prec,
            };
        }
        let low = self.low + other.low;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(p) = prec {
            len = min(len as i64, (p - low).max(0)) as usize;
        }
        let mut out = vec![0; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 || i >= len {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b != 0 {
                    out[i + j] = gf.add(out[i + j], gf.mul(a, b));
                }
            }
        }
        Self::from_raw(gf, low, out, prec)
    }

    /// True when the element is `c * t^k`.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1 && self.prec.is_none()
    }

    /// Multiplicative inverse.
    ///
    /// Exact monomials invert exactly. Anything else yields a truncated
    /// series carrying `rel_prec` significant coefficients, or fewer when
    /// the input itself is truncated.
    pub fn inv(&self, rel_prec: i64) -> Result<Self> {
        let v = self.valuation()?;
        if self.is_monomial() {
            let c = self.gf.inv(self.coeffs[0]);
            return Ok(Self::monomial(self.gf, c, -v));
        }
        let rel = match self.prec {
            Some(p) => min(rel_prec, p - v),
            None => rel_prec,
        }
        .max(1) as usize;
        let gf = self.gf;
        let u0inv = gf.inv(self.coeffs[0]);
        // series inverse of u = sum u_i t^i, b_0 = 1/u_0, b_k = -b_0 sum_{i>=1} u_i b_{k-i}
        let mut b = vec![0 as Code; rel];
        b[0] = u0inv;
        for k in 1..rel {
            let mut s: Code = 0;
            for i in 1..=k.min(self.coeffs.len() - 1) {
                s = gf.add(s, gf.mul(self.coeffs[i], b[k - i]));
            }
            b[k] = gf.neg(gf.mul(u0inv, s));
        }
        Ok(Self::from_raw(gf, -v, b, Some(-v + rel as i64)))
    }

    /// Quotient `self / other` with `rel_prec` significant digits for non-monomial divisors.
    pub fn div(&self, other: &Self, rel_prec: i64) -> Result<Self> {
        Ok(self * &other.inv(rel_prec)?)
    }

    /// Coefficient-wise Frobenius; the nontrivial automorphism of `E/F`.
    pub fn sigma(&self) -> Result<Self> {
        if self.gf.degree() != 2 {
            return Err(Error::WrongField("sigma requires an element of E".into()));
        }
        Ok(self.sigma_unchecked())
    }

    /// Frobenius on coefficients; identity on elements of `F`.
    pub fn sigma_unchecked(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&c| self.gf.frobenius(c)).collect();
        LocalElement {
            gf: self.gf,
            low: self.low,
            coeffs,
            prec: self.prec,
        }
    }

    /// Norm `x * sigma(x)` from `E` down to `F`.
    pub fn norm(&self) -> Result<Self> {
        let n = self * &self.sigma()?;
        n.to_base()
    }

    /// Views an element of `E` with prime-field coefficients as an element of `F`.
    pub fn to_base(&self) -> Result<Self> {
        if self.gf.degree() == 1 {
            return Ok(self.clone());
        }
        if self.coeffs.iter().any(|&c| !self.gf.is_in_prime_field(c)) {
            return Err(Error::CoefficientNotRational);
        }
        Ok(LocalElement {
            gf: self.gf.prime_field(),
            low: self.low,
            coeffs: self.coeffs.clone(),
            prec: self.prec,
        })
    }

    /// Includes an element of `F` into `E`.
    pub fn to_quadratic(&self) -> Self {
        LocalElement {
            gf: self.gf.quadratic(),
            low: self.low,
            coeffs: self.coeffs.clone(),
            prec: self.prec,
        }
    }

    /// Moves the element into the given residue field (which must contain its coefficients).
    pub fn in_field(&self, gf: &'static Gf) -> Result<Self> {
        if gf == self.gf {
            Ok(self.clone())
        } else if gf.degree() == 2 {
            Ok(self.to_quadratic())
        } else {
            self.to_base()
        }
    }

    /// `(-1)^v(x)`, the quadratic character attached to `E/F`.
    pub fn eta(&self) -> Result<i8> {
        Ok(if self.valuation()?.rem_euclid(2) == 0 {
            1
        } else {
            -1
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.gf);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Whether the element lies in the valuation ring, as far as its precision tells.
    pub fn is_integral(&self) -> bool {
        self.valuation_or_bound() >= 0
    }
}

impl PartialEq for LocalElement {
    fn eq(&self, other: &Self) -> bool {
        self.gf == other.gf
            && self.prec == other.prec
            && self.coeffs == other.coeffs
            && (self.coeffs.is_empty() || self.low == other.low)
    }
}

impl Eq for LocalElement {}

impl Hash for LocalElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.gf.prime().hash(state);
        self.gf.degree().hash(state);
        if !self.coeffs.is_empty() {
            self.low.hash(state);
        }
        self.coeffs.hash(state);
        self.prec.hash(state);
    }
}

impl PartialOrd for LocalElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Deterministic total order used for canonical tie-breaking, not an arithmetic order.
impl Ord for LocalElement {
    fn cmp(&self, other: &Self) -> Ordering {
        let a: Vec<(i64, Code)> = self.terms().collect();
        let b: Vec<(i64, Code)> = other.terms().collect();
        a.cmp(&b).then(self.prec.cmp(&other.prec))
    }
}

impl<'a> Add<&'a LocalElement> for &'a LocalElement {
    type Output = LocalElement;
    fn add(self, rhs: &'a LocalElement) -> LocalElement {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a LocalElement> for &'a LocalElement {
    type Output = LocalElement;
    fn sub(self, rhs: &'a LocalElement) -> LocalElement {
        self.add_impl(rhs, true)
    }
}

impl<'a> Mul<&'a LocalElement> for &'a LocalElement {
    type Output = LocalElement;
    fn mul(self, rhs: &'a LocalElement) -> LocalElement {
        self.mul_impl(rhs)
    }
}

impl Neg for &LocalElement {
    type Output = LocalElement;
    fn neg(self) -> LocalElement {
        self.neg_impl()
    }
}

impl Add for LocalElement {
    type Output = LocalElement;
    fn add(self, rhs: LocalElement) -> LocalElement {
        self.add_impl(&rhs, false)
    }
}

impl Sub for LocalElement {
    type Output = LocalElement;
    fn sub(self, rhs: LocalElement) -> LocalElement {
        self.add_impl(&rhs, true)
    }
}

impl Mul for LocalElement {
    type Output = LocalElement;
    fn mul(self, rhs: LocalElement) -> LocalElement {
        self.mul_impl(&rhs)
    }
}

impl Neg for LocalElement {
    type Output = LocalElement;
    fn neg(self) -> LocalElement {
        self.neg_impl()
    }
}

impl fmt::Display for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.terms() {
            let coeff = self.gf.fmt_code(c);
            let coeff = if coeff.contains('w') && coeff.contains('+') {
                format!("({coeff})")
            } else {
                coeff
            };
            parts.push(match (k, coeff.as_str()) {
                (0, _) => coeff.clone(),
                (1, "1") => "t".to_string(),
                (_, "1") => format!("t^{k}"),
                (1, _) => format!("{coeff}*t"),
                _ => format!("{coeff}*t^{k}"),
            });
        }
        if let Some(p) = self.prec {
            parts.push(format!("O(t^{p})"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
