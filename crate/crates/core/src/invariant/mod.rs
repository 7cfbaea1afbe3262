//! Invariant polynomials, matching, vanishing orders and the functional-equation sign.

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::localfield::{LocalElement, Matrix, DEFAULT_PRECISION};
use crate::orbital::{Lambda, LinearRep, QuaternionRep};
use crate::polyfactor::{
    is_separable, newton_profile, poly_sqrt, FactorEntry, FactorProfile, MonicPoly, Poly,
};

/// `δ = Inv(·; T)` with its factor data and regularity flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantProfile {
    pub delta: MonicPoly,
    /// `None` when `δ(0) = 0`.
    pub profile: Option<FactorProfile>,
    pub separable: bool,
    pub nonzero_at_zero: bool,
    pub nonzero_at_one: bool,
}

impl InvariantProfile {
    pub fn new(delta: MonicPoly) -> Result<Self> {
        let nonzero_at_zero = !delta.coeff(0).is_zero();
        let nonzero_at_one = !delta
            .poly()
            .eval(&LocalElement::one(delta.field()))
            .is_zero();
        let separable = is_separable(&delta)?;
        let profile = if nonzero_at_zero {
            Some(newton_profile(&delta)?)
        } else {
            None
        };
        Ok(InvariantProfile {
            delta,
            profile,
            separable,
            nonzero_at_zero,
            nonzero_at_one,
        })
    }

    pub fn degree(&self) -> usize {
        self.delta.degree()
    }

    pub fn is_regular_semisimple(&self) -> bool {
        self.separable && self.nonzero_at_zero && self.nonzero_at_one
    }

    fn require_regular(&self) -> Result<()> {
        if !self.separable {
            return Err(Error::NotSeparable);
        }
        if !self.nonzero_at_zero || !self.nonzero_at_one {
            return Err(Error::NotRegular(format!(
                "δ = {} vanishes at 0 or 1",
                self.delta.poly()
            )));
        }
        Ok(())
    }

    fn complete_profile(&self) -> Result<&FactorProfile> {
        match &self.profile {
            Some(p) if p.complete => Ok(p),
            _ => Err(Error::ProfileIncomplete("factor data unavailable".into())),
        }
    }
}

impl Serialize for InvariantProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Flags {
            separable: bool,
            nonzero_at_zero: bool,
            nonzero_at_one: bool,
            regular_semisimple: bool,
        }
        let factors: Option<Vec<(u32, u32, i64)>> = self
            .profile
            .as_ref()
            .map(|p| p.entries.iter().map(|e| (e.e, e.f, e.c)).collect());
        let mut st = s.serialize_struct("InvariantProfile", 3)?;
        st.serialize_field("delta", &self.delta.poly().to_strings())?;
        st.serialize_field("factors", &factors)?;
        st.serialize_field(
            "flags",
            &Flags {
                separable: self.separable,
                nonzero_at_zero: self.nonzero_at_zero,
                nonzero_at_one: self.nonzero_at_one,
                regular_semisimple: self.is_regular_semisimple(),
            },
        )?;
        st.end()
    }
}

/// `Inv(γ(x); T) = char(x; T)`.
pub fn inv_linear(x: &Matrix) -> Result<InvariantProfile> {
    InvariantProfile::new(LinearRep::new(x.clone(), Lambda::Zero)?.invariant()?)
}

/// `Inv(g(x); T) = char(xσ(x)π^ε; T)`.
pub fn inv_quaternion(x: &Matrix, lambda: Lambda) -> Result<InvariantProfile> {
    InvariantProfile::new(QuaternionRep::new(x.clone(), lambda)?.invariant()?)
}

/// The monic square root of `char(z_γ²; T)` with `z_γ = γ_+^{-1} γ_-`.
pub fn inv_general(gamma: &Matrix) -> Result<InvariantProfile> {
    if !gamma.is_square() || !gamma.rows().is_multiple_of(2) {
        return Err(Error::DimensionMismatch("γ must be 2n × 2n".into()));
    }
    if gamma.field().degree() != 1 {
        return Err(Error::WrongField("γ must be over F".into()));
    }
    let gf = gamma.field();
    let n = gamma.rows() / 2;
    let z = Matrix::zeros(gf, n, n);
    let a = gamma.submatrix(0, n, 0, n);
    let b = gamma.submatrix(0, n, n, 2 * n);
    let c = gamma.submatrix(n, 2 * n, 0, n);
    let d = gamma.submatrix(n, 2 * n, n, 2 * n);
    let plus = Matrix::block(&a, &z, &z, &d);
    let minus = Matrix::block(&z, &b, &c, &z);
    if plus.det().is_zero() {
        return Err(Error::NotRegular("γ_+ is singular".into()));
    }
    if minus.det().is_zero() {
        return Err(Error::NotRegular("γ_- is singular".into()));
    }
    let zg = plus.inverse(DEFAULT_PRECISION)?.mul(&minus);
    let char_sq = MonicPoly::new(Poly::new(gf, zg.mul(&zg).charpoly()))?;
    if !char_sq.poly().is_exact() {
        return Err(Error::InsufficientPrecision(
            "γ_+ has a non-monomial pivot".into(),
        ));
    }
    InvariantProfile::new(poly_sqrt(&char_sq)?)
}

/// Exact equality of invariants of two regular semi-simple elements.
pub fn match_test(a: &InvariantProfile, b: &InvariantProfile) -> Result<bool> {
    a.require_regular()?;
    b.require_regular()?;
    Ok(a.delta == b.delta)
}

/// `B ⊗_F L_i` is a division algebra: `f_i` odd and the root valuation `c_i / f_i` odd.
fn is_division(e: &FactorEntry) -> bool {
    debug_assert_eq!(e.c % e.f as i64, 0);
    e.f % 2 == 1 && (e.c / e.f as i64).rem_euclid(2) == 1
}

/// `ord_0` counts division factors; `ord_{1/2}` counts split factors of odd degree
/// and division factors of even degree.
pub fn ord_lambda(p: &InvariantProfile, lambda: Lambda) -> Result<u32> {
    p.require_regular()?;
    let entries = &p.complete_profile()?.entries;
    let count = entries
        .iter()
        .filter(|e| {
            let div = is_division(e);
            match lambda {
                Lambda::Zero => div,
                Lambda::Half => (!div && e.d() % 2 == 1) || (div && e.d() % 2 == 0),
            }
        })
        .count();
    Ok(count as u32)
}

/// `ε_{1/2} = (-1)^{n + v(δ(0))}`.
pub fn epsilon_sign(p: &InvariantProfile) -> Result<i64> {
    p.require_regular()?;
    let r = p.delta.coeff(0).valuation()?;
    Ok(if (p.degree() as i64 + r).rem_euclid(2) == 0 {
        1
    } else {
        -1
    })
}

/// A matching element of the other group exists iff `ord_λ(δ) = 0`.
pub fn matching_exists(p: &InvariantProfile, lambda: Lambda) -> Result<bool> {
    Ok(ord_lambda(p, lambda)? == 0)
}

/// Where `δ̃ = π^{-n} δ(πT)` lies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ShiftClass {
    /// `δ̃ ∈ T^n + πO[T]`
    TopNilpotent,
    /// `δ̃ ∈ O[T]` but not topologically nilpotent
    IntegralUnitPart,
    NonIntegral,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ShiftedInvariant {
    pub profile: InvariantProfile,
    pub class: ShiftClass,
}

/// `δ̃(T) = π^{-n} δ(πT)` with its classification.
pub fn shift_invariant(p: &InvariantProfile) -> Result<ShiftedInvariant> {
    let n = p.degree() as i64;
    let gf = p.delta.field();
    let coeffs: Vec<LocalElement> = p
        .delta
        .poly()
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c.shift(i as i64 - n))
        .collect();
    let shifted = MonicPoly::from_coeffs(gf, coeffs)?;
    let lower = || {
        (0..shifted.degree())
            .map(|i| shifted.coeff(i))
            .filter(|c| !c.is_zero())
    };
    let class = if lower().all(|c| c.valuation_or_bound() >= 1) {
        ShiftClass::TopNilpotent
    } else if lower().all(|c| c.valuation_or_bound() >= 0) {
        ShiftClass::IntegralUnitPart
    } else {
        ShiftClass::NonIntegral
    };
    Ok(ShiftedInvariant {
        profile: InvariantProfile::new(shifted)?,
        class,
    })
}

#[cfg(test)]
mod tests;
