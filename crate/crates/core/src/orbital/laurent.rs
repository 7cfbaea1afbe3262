//! Integer Laurent polynomials in `q^s`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::{Serialize, SerializeMap, Serializer};

/// `Σ_k c_k q^{ks}` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QsLaurent {
    q: u64,
    coeffs: BTreeMap<i64, i64>,
}

impl QsLaurent {
    pub fn zero(q: u64) -> Self {
        QsLaurent {
            q,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(q: u64, c: i64) -> Self {
        Self::monomial(q, c, 0)
    }

    /// `c q^{ks}`
    pub fn monomial(q: u64, c: i64, k: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != 0 {
            coeffs.insert(k, c);
        }
        QsLaurent { q, coeffs }
    }

    pub fn from_coeffs(q: u64, terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut out = Self::zero(q);
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i64) -> i64 {
        self.coeffs.get(&k).copied().unwrap_or(0)
    }

    /// Nonzero terms `(k, c_k)` in increasing `k`.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn add_term(&mut self, k: i64, c: i64) {
        let e = self.coeffs.entry(k).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&k);
        }
    }

    /// Multiplies by `q^{ks}`.
    pub fn shift(&self, k: i64) -> Self {
        QsLaurent {
            q: self.q,
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::from_coeffs(self.q, self.terms().map(|(k, a)| (k, a * c)))
    }

    /// The polynomial with `s` replaced by `-s`.
    pub fn reflect(&self) -> Self {
        QsLaurent {
            q: self.q,
            coeffs: self.coeffs.iter().map(|(&e, &c)| (-e, c)).collect(),
        }
    }

    /// Exact division of every coefficient, or `None` when some coefficient is not divisible.
    pub fn div_exact(&self, d: i64) -> Option<Self> {
        if self.terms().any(|(_, c)| c % d != 0) {
            return None;
        }
        Some(Self::from_coeffs(
            self.q,
            self.terms().map(|(k, c)| (k, c / d)),
        ))
    }

    /// Value at `s = 0`.
    pub fn central_value(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// Derivative at `s = 0` in units of `log q`.
    pub fn central_derivative(&self) -> i64 {
        self.terms().map(|(k, c)| k * c).sum()
    }

    /// `Σ_k k^j c_k`, the `j`-th derivative at `s = 0` in units of `(log q)^j`.
    pub fn moment(&self, j: u32) -> i128 {
        self.terms()
            .map(|(k, c)| (k as i128).pow(j) * c as i128)
            .sum()
    }

    /// Order of vanishing at `s = 0`; `None` for the zero polynomial.
    pub fn vanishing_order(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        // a nonzero Laurent polynomial with d terms has a nonzero moment below d
        (0..self.coeffs.len() as u32).find(|&j| self.moment(j) != 0)
    }
}

/// `(Orb(s=0), ∂Orb(s=0) / log q)`
pub fn central_value_and_derivative(p: &QsLaurent) -> (i64, i64) {
    (p.central_value(), p.central_derivative())
}

impl Add for &QsLaurent {
    type Output = QsLaurent;
    fn add(self, other: &QsLaurent) -> QsLaurent {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, c);
        }
        out
    }
}

impl Sub for &QsLaurent {
    type Output = QsLaurent;
    fn sub(self, other: &QsLaurent) -> QsLaurent {
        self + &(-other)
    }
}

impl Neg for &QsLaurent {
    type Output = QsLaurent;
    fn neg(self) -> QsLaurent {
        self.scale(-1)
    }
}

impl Mul for &QsLaurent {
    type Output = QsLaurent;
    fn mul(self, other: &QsLaurent) -> QsLaurent {
        let mut out = QsLaurent::zero(self.q);
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl fmt::Display for QsLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms().rev().enumerate() {
            let sign = if c < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}*")?;
                    }
                    match k {
                        1 => write!(f, "q^s")?,
                        -1 => write!(f, "q^-s")?,
                        _ => write!(f, "q^({k}s)")?,
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for QsLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.coeffs.len()))?;
        for (k, c) in &self.coeffs {
            m.serialize_entry(&k.to_string(), c)?;
        }
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> QsLaurent {
        QsLaurent::from_coeffs(3, terms.iter().copied())
    }

    #[test]
    fn central_values() {
        assert_eq!(
            central_value_and_derivative(&p(&[(1, 1), (-1, -1)])),
            (0, 2)
        );
        assert_eq!(central_value_and_derivative(&p(&[(0, 1)])), (1, 0));
        assert_eq!(
            central_value_and_derivative(&p(&[(2, 1), (0, -1), (-2, 1)])),
            (1, 0)
        );
    }

    #[test]
    fn arithmetic_and_zero_coefficients() {
        let a = p(&[(1, 1), (-1, -1)]);
        assert!((&a - &a).is_zero());
        assert_eq!(&a * &a, p(&[(2, 1), (0, -2), (-2, 1)]));
        assert_eq!(a.reflect(), a.scale(-1));
        assert_eq!(a.shift(1), p(&[(2, 1), (0, -1)]));
    }

    #[test]
    fn vanishing_orders() {
        assert_eq!(p(&[]).vanishing_order(), None);
        assert_eq!(p(&[(0, 2)]).vanishing_order(), Some(0));
        assert_eq!(p(&[(1, 1), (-1, -1)]).vanishing_order(), Some(1));
        // (q^s - 1)^2 q^{-s} = q^s - 2 + q^{-s}
        assert_eq!(p(&[(1, 1), (0, -2), (-1, 1)]).vanishing_order(), Some(2));
        // (q^s - 1)^3
        assert_eq!(
            p(&[(3, 1), (2, -3), (1, 3), (0, -1)]).vanishing_order(),
            Some(3)
        );
    }

    #[test]
    fn json_object() {
        let s = serde_json::to_string(&p(&[(2, 1), (0, -1)])).unwrap();
        assert_eq!(s, r#"{"0":-1,"2":1}"#);
        assert_eq!(p(&[(1, 1), (-1, -1)]).to_string(), "q^s - q^-s");
    }
}
