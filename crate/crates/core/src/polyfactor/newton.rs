//! Newton polygons, residual polynomials, factor profiles and roots.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::poly::{fq, MonicPoly, Poly};
use crate::error::{Error, Result};
use crate::localfield::{Code, LocalElement, DEFAULT_PRECISION};

/// Maximal number of shift-and-rescale refinements.
pub const MAX_REFINEMENT_DEPTH: usize = 32;

/// Field data of one irreducible factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorEntry {
    /// Ramification index.
    pub e: u32,
    /// Inertia degree.
    pub f: u32,
    /// Valuation of the factor's constant term.
    pub c: i64,
}

impl FactorEntry {
    pub fn d(&self) -> u32 {
        self.e * self.f
    }

    fn slope_cmp(&self, other: &Self) -> Ordering {
        (self.c * other.d() as i64).cmp(&(other.c * self.d() as i64))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorProfile {
    pub entries: Vec<FactorEntry>,
    pub complete: bool,
}

impl FactorProfile {
    pub fn degree(&self) -> u32 {
        self.entries.iter().map(|e| e.d()).sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn sorted(mut entries: Vec<FactorEntry>) -> Self {
        entries.sort_by(|a, b| a.slope_cmp(b).then(a.f.cmp(&b.f)).then(a.e.cmp(&b.e)));
        FactorProfile {
            entries,
            complete: true,
        }
    }
}

/// One edge of the Newton polygon, roots of valuation `a / b`.
#[derive(Debug, Clone)]
pub(crate) struct Segment {
    pub a: i64,
    pub b: i64,
    /// Residual polynomial over the residue field, constant term first.
    pub residual: fq::FqPoly,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Segments of the Newton polygon of a polynomial with nonzero constant term.
pub(crate) fn segments(p: &Poly) -> Result<Vec<Segment>> {
    let mut pts = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            if !c.is_exact() {
                return Err(Error::InsufficientPrecision(format!(
                    "coefficient of T^{i} is zero to working precision"
                )));
            }
            continue;
        }
        pts.push((i as i64, c.valuation()?));
    }
    if pts.first().map(|x| x.0) != Some(0) {
        return Err(Error::NotRegular("polynomial vanishes at zero".into()));
    }
    // lower convex hull
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop (x2, y2) when it lies on or above the chord to pt
            if (y2 - y1) * (pt.0 - x1) >= (pt.1 - y1) * (x2 - x1) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut out = Vec::new();
    for w in hull.windows(2) {
        let ((i, vi), (j, vj)) = (w[0], w[1]);
        let g = gcd(vi - vj, j - i);
        let (a, b) = ((vi - vj) / g, (j - i) / g);
        let residual: fq::FqPoly = (0..=(j - i) / b)
            .map(|k| p.coeff((i + k * b) as usize).coeff(vi - k * a))
            .collect();
        out.push(Segment {
            a,
            b,
            residual: fq::trim(residual),
        });
    }
    Ok(out)
}

/// Splits off the exact factor `T^k`.
fn strip_zero_roots(p: &Poly) -> (usize, Poly) {
    let k = p
        .coeffs()
        .iter()
        .take_while(|c| c.is_zero() && c.is_exact())
        .count();
    (k, Poly::new(p.field(), p.coeffs()[k..].to_vec()))
}

/// `t^{-a n} P(t^a (T + r))`, monic again.
fn refine(p: &Poly, a: i64, r: Code) -> Poly {
    let gf = p.field();
    let n = p.degree().unwrap_or(0) as i64;
    p.substitute_affine(&LocalElement::t_pow(gf, a), &LocalElement::constant(gf, r))
        .map_coeffs(|c| c.shift(-a * n))
}

/// Irreducible-factor data `(e_i, f_i, c_i)` of a separable monic polynomial.
pub fn newton_profile(p: &MonicPoly) -> Result<FactorProfile> {
    if !p.poly().is_exact() {
        return Err(Error::InsufficientPrecision(
            "profile needs exact coefficients".into(),
        ));
    }
    if p.coeff(0).is_zero() {
        return Err(Error::NotRegular("polynomial vanishes at zero".into()));
    }
    let mut entries = Vec::new();
    profile_rec(p.poly(), 0, &mut entries, false)?;
    Ok(FactorProfile::sorted(entries))
}

fn profile_rec(
    p: &Poly,
    depth: usize,
    out: &mut Vec<FactorEntry>,
    positive_only: bool,
) -> Result<()> {
    if depth > MAX_REFINEMENT_DEPTH {
        return Err(Error::ProfileIncomplete(format!(
            "refinement depth exceeded {MAX_REFINEMENT_DEPTH}"
        )));
    }
    let gf = p.field();
    let (zeros, p) = strip_zero_roots(p);
    out.extend((0..zeros).map(|_| FactorEntry { e: 1, f: 1, c: 0 }));
    for seg in segments(&p)?
        .into_iter()
        .filter(|s| !positive_only || s.a > 0)
    {
        for (phi, mult) in fq::factor(gf, &seg.residual) {
            let f = fq::deg(&phi).unwrap_or(0) as u32;
            if mult == 1 {
                out.push(FactorEntry {
                    e: seg.b as u32,
                    f,
                    c: f as i64 * seg.a,
                });
                continue;
            }
            if seg.b != 1 || f != 1 {
                return Err(Error::ProfileIncomplete(format!(
                    "repeated residual factor of degree {f} on an edge of denominator {}",
                    seg.b
                )));
            }
            let r = gf.neg(phi[0]);
            let sub = refine(&p, seg.a, r);
            let mut inner = Vec::new();
            profile_rec(&sub, depth + 1, &mut inner, true)?;
            out.extend(inner.into_iter().map(|en| FactorEntry {
                c: en.d() as i64 * seg.a,
                ..en
            }));
        }
    }
    Ok(())
}

/// Roots of a separable polynomial in its coefficient field, correct modulo `t^prec`.
///
/// Returned roots are exact Laurent polynomials approximating the true roots.
pub fn roots_in_field(p: &MonicPoly, prec: i64) -> Result<Vec<LocalElement>> {
    let mut out = Vec::new();
    roots_rec(p.poly(), prec, 0, &mut out, false)?;
    out.sort();
    Ok(out)
}

/// [`roots_in_field`] at the default precision.
pub fn roots(p: &MonicPoly) -> Result<Vec<LocalElement>> {
    roots_in_field(p, DEFAULT_PRECISION)
}

fn roots_rec(
    p: &Poly,
    prec: i64,
    depth: usize,
    out: &mut Vec<LocalElement>,
    positive_only: bool,
) -> Result<()> {
    if depth > MAX_REFINEMENT_DEPTH {
        return Err(Error::ProfileIncomplete(format!(
            "refinement depth exceeded {MAX_REFINEMENT_DEPTH}"
        )));
    }
    let gf = p.field();
    let (zeros, p) = strip_zero_roots(p);
    out.extend((0..zeros).map(|_| LocalElement::zero(gf)));
    for seg in segments(&p)?
        .into_iter()
        .filter(|s| (!positive_only || s.a > 0) && s.b == 1)
    {
        for (phi, mult) in fq::factor(gf, &seg.residual) {
            if phi.len() != 2 {
                continue;
            }
            let r = gf.neg(phi[0]);
            let sub = refine(&p, seg.a, r);
            let mut inner = Vec::new();
            if mult == 1 {
                inner.push(newton_lift(&sub, prec - seg.a)?);
            } else {
                roots_rec(&sub, prec - seg.a, depth + 1, &mut inner, true)?;
            }
            let shift = LocalElement::t_pow(gf, seg.a);
            let rr = LocalElement::constant(gf, r);
            out.extend(
                inner
                    .into_iter()
                    .map(|g| (&shift * &(&rr + &g)).drop_from(prec)),
            );
        }
    }
    Ok(())
}

/// The unique root of positive valuation, assuming every other root has valuation `<= 0`.
fn newton_lift(p: &Poly, prec: i64) -> Result<LocalElement> {
    let gf = p.field();
    let dp = p.derivative();
    let mut g = LocalElement::zero(gf);
    for _ in 0..64 {
        let num = p.eval(&g);
        if num.is_zero() {
            return Ok(g);
        }
        let den = dp.eval(&g);
        let (vn, vd) = (num.valuation()?, den.valuation()?);
        if vn - vd >= prec {
            return Ok(g);
        }
        let rel = prec - (vn - vd) + 2;
        let delta = &num * &den.inv(rel)?;
        g = (&g - &delta).drop_from(prec.max(1));
    }
    Err(Error::InsufficientPrecision(
        "Newton iteration did not converge".into(),
    ))
}
