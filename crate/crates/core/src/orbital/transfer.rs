//! Transfer factors `Ω(γ(x), Λ_+ ⊕ Λ_-, s)`.

use super::{LinearRep, QsLaurent};
use crate::error::{Error, Result};
use crate::lattice::{canonicalize, LatticeBasis, LatticePair};
use crate::localfield::{LocalElement, Matrix};

/// `(γΛ)_+` and `(γΛ)_-` for `γ = [[1, x], [1, 1]]`, checking that `γΛ` is
/// their direct sum.
fn image_parts(x: &Matrix, pair: &LatticePair) -> Result<(LatticeBasis, LatticeBasis)> {
    let a = pair.plus.columns();
    let b = pair.minus.columns();
    let mut plus: Vec<Vec<LocalElement>> = a.clone();
    plus.extend(b.iter().map(|v| x.mul_vec(v)));
    let mut minus = a;
    minus.extend(b);
    let p = canonicalize(&plus)?;
    let m = canonicalize(&minus)?;
    let gf = x.field();
    let n = x.rows();
    let det_gamma = Matrix::identity(gf, n).sub(x).det();
    if det_gamma.is_zero() {
        return Err(Error::NotRegular("det(1 - x) = 0".into()));
    }
    let expected = pair.plus.volume() + pair.minus.volume() + det_gamma.valuation()?;
    if p.volume() + m.volume() != expected {
        return Err(Error::NotLattice(
            "γΛ is not a direct sum of its projections".into(),
        ));
    }
    Ok((p, m))
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Block formula: with `h_1 O^{2n} = Λ` and `h_2 O^{2n} = γΛ` block diagonal,
/// `Ω = η(det(c d^{-1})) |det(b^{-1} c)|^s` for `h_1^{-1} γ h_2 = [[a, b], [c, d]]`.
pub fn transfer_factor(rep: &LinearRep, pair: &LatticePair) -> Result<QsLaurent> {
    let (p, m) = image_parts(&rep.x, pair)?;
    let vx = rep.x.det().valuation()?;
    // h_1^{-1} γ h_2 = [[A^{-1}C, A^{-1}xD], [B^{-1}C, B^{-1}D]]
    let (va, vb) = (pair.plus.volume(), pair.minus.volume());
    let (vc, vd) = (p.volume(), m.volume());
    let eta = sign(vc - vd);
    let v = (vx + vd - va) - (vc - vb);
    Ok(QsLaurent::monomial(rep.q(), eta, v))
}

/// Which combination of indices forms the exponent in the index formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `[(γΛ)_+ : zΛ_-] - [(γΛ)_- : zΛ_+]`; agrees with the block formula.
    #[default]
    Difference,
    /// `[(γΛ)_+ : zΛ_-] + [(γΛ)_- : zΛ_+]`
    Sum,
}

/// Index formula with `z = [[0, x], [1, 0]]`:
/// sign `(-1)^{[(γΛ)_- : zΛ_+] + [(γΛ)_- : Λ_-]}`.
pub fn transfer_factor_indices(
    rep: &LinearRep,
    pair: &LatticePair,
    orientation: Orientation,
) -> Result<QsLaurent> {
    let (p, m) = image_parts(&rep.x, pair)?;
    // zΛ_+ lies in the minus space as a copy of Λ_+, zΛ_- in the plus space as xΛ_-
    let z_plus = &pair.plus;
    let z_minus = pair.minus.apply(&rep.x)?;
    let i_minus = m.index_of(z_plus)?;
    let i_lambda = m.index_of(&pair.minus)?;
    let i_plus = p.index_of(&z_minus)?;
    let e = match orientation {
        Orientation::Difference => i_plus - i_minus,
        Orientation::Sum => i_plus + i_minus,
    };
    Ok(QsLaurent::monomial(rep.q(), sign(i_minus + i_lambda), e))
}
