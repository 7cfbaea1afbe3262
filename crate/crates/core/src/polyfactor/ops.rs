//! Separability, square roots and Hensel splitting.

use super::poly::{fq, MonicPoly, Poly};
use crate::error::{Error, Result};
use crate::localfield::{LocalElement, DEFAULT_PRECISION};

/// Whether `P` has no repeated roots over an algebraic closure.
pub fn is_separable(p: &MonicPoly) -> Result<bool> {
    let poly = p.poly();
    if poly.degree().unwrap_or(0) == 0 {
        return Ok(true);
    }
    let disc = poly.discriminant_resultant();
    if !disc.is_zero() {
        return Ok(true);
    }
    if disc.is_exact() {
        Ok(false)
    } else {
        Err(Error::InsufficientPrecision(
            "discriminant vanishes to working precision".into(),
        ))
    }
}

/// The monic `Q` with `Q^2 = P`.
pub fn poly_sqrt(p: &MonicPoly) -> Result<MonicPoly> {
    let n = p.degree();
    if !n.is_multiple_of(2) {
        return Err(Error::NotASquare);
    }
    let m = n / 2;
    let gf = p.field();
    let q = if gf.prime() == 2 {
        sqrt_char_two(p.poly(), m)?
    } else {
        let half = gf.inv(gf.from_int(2));
        let mut q = vec![LocalElement::zero(gf); m + 1];
        q[m] = LocalElement::one(gf);
        for k in 1..=m {
            // coefficient of T^{2m-k} in Q^2 is 2 q_{m-k} plus products of known coefficients
            let mut s = LocalElement::zero(gf);
            for a in (m - k + 1)..=m {
                let b = 2 * m - k - a;
                if b > m - k && b <= m {
                    s = &s + &(&q[a] * &q[b]);
                }
            }
            q[m - k] = (&p.coeff(2 * m - k) - &s).scale(half);
        }
        Poly::new(gf, q)
    };
    if q.mul(&q) != *p.poly() {
        return Err(Error::NotASquare);
    }
    MonicPoly::new(q)
}

fn sqrt_char_two(p: &Poly, m: usize) -> Result<Poly> {
    let gf = p.field();
    let half_order = (gf.order() / 2) as u64;
    let mut q = Vec::with_capacity(m + 1);
    for (i, c) in p.coeffs().iter().enumerate() {
        if i % 2 == 1 {
            if !c.is_zero() {
                return Err(Error::NotASquare);
            }
            continue;
        }
        let mut terms = Vec::new();
        for (e, a) in c.terms() {
            if e % 2 != 0 {
                return Err(Error::NotASquare);
            }
            terms.push((e / 2, gf.pow(a, half_order)));
        }
        q.push(LocalElement::from_terms(gf, &terms));
    }
    Ok(Poly::new(gf, q))
}

/// Splits an integral monic `P` as `P0 * P1` with `P0 = T^k mod t` and `P1(0)` a unit.
pub fn hensel_split(p: &MonicPoly) -> Result<(MonicPoly, MonicPoly)> {
    hensel_split_to(p, DEFAULT_PRECISION)
}

/// [`hensel_split`] to absolute precision `prec`.
///
/// Factors are exact when the lift terminates; otherwise non-leading
/// coefficients carry precision `prec`.
pub fn hensel_split_to(p: &MonicPoly, prec: i64) -> Result<(MonicPoly, MonicPoly)> {
    let poly = p.poly();
    let gf = poly.field();
    if let Some(c) = poly.coeffs().iter().find(|c| !c.is_integral()) {
        return Err(Error::NotIntegral(format!(
            "coefficient {c} has negative valuation"
        )));
    }
    let n = p.degree();
    let prec = poly
        .coeffs()
        .iter()
        .filter_map(|c| c.precision())
        .fold(prec, i64::min);
    let reduce = |q: &Poly, k: i64| -> fq::FqPoly {
        fq::trim(q.coeffs().iter().map(|c| c.coeff(k)).collect())
    };
    let pbar = reduce(poly, 0);
    let m = pbar.iter().take_while(|&&c| c == 0).count();
    let p1bar: fq::FqPoly = pbar[m..].to_vec();
    let mut tm = vec![0; m];
    tm.push(1);
    let (_, _, r) = fq::xgcd(gf, &tm, &p1bar);

    let lift = |f: &fq::FqPoly, k: i64| -> Poly {
        Poly::new(
            gf,
            f.iter()
                .map(|&c| LocalElement::monomial(gf, c, k))
                .collect(),
        )
    };
    let mut p0 = lift(&tm, 0);
    let mut p1 = lift(&p1bar, 0);
    let mut exact = false;
    for k in 1..prec {
        let err = poly.sub(&p0.mul(&p1));
        if err.coeffs().iter().all(|c| c.is_zero()) && err.is_exact() {
            exact = true;
            break;
        }
        let e = reduce(&err, k);
        if e.is_empty() {
            continue;
        }
        // A * P1bar + B * T^m = e with deg A < m
        let a = fq::divrem(gf, &fq::mul(gf, &e, &r), &tm).1;
        let rest = fq::sub(gf, &e, &fq::mul(gf, &a, &p1bar));
        let b = fq::divrem(gf, &rest, &tm).0;
        p0 = p0.add(&lift(&a, k));
        p1 = p1.add(&lift(&b, k));
    }
    if !exact {
        let err = poly.sub(&p0.mul(&p1));
        if err.coeffs().iter().any(|c| c.valuation_or_bound() < prec) {
            return Err(Error::InsufficientPrecision(
                "Hensel residue check failed".into(),
            ));
        }
        p0 = truncate_tail(&p0, prec);
        p1 = truncate_tail(&p1, prec);
    }
    debug_assert_eq!(p0.degree().unwrap_or(0) + p1.degree().unwrap_or(0), n);
    Ok((MonicPoly::new(p0)?, MonicPoly::new(p1)?))
}

fn truncate_tail(p: &Poly, prec: i64) -> Poly {
    let d = p.degree().unwrap_or(0);
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| if i == d { c.clone() } else { c.truncate(prec) })
        .collect();
    Poly::new(p.field(), coeffs)
}
