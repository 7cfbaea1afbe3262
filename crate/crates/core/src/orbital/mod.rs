//! Orbital integrals as finite sums over lattice classes.

mod laurent;
mod transfer;

use rayon::prelude::*;

pub use laurent::{central_value_and_derivative, QsLaurent};
pub use transfer::{transfer_factor, transfer_factor_indices, Orientation};

use crate::enumerate::{
    enum_pairs_with, enum_sigma_fixed_with, enum_sigma_with, enum_stable_with, Certificate,
    EnumConfig, OrbitList,
};
use crate::error::{Error, Result};
use crate::localfield::{LocalElement, Matrix};
use crate::polyfactor::{is_separable, MonicPoly};

/// `λ`: the Hasse invariant of the quaternion algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Lambda {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1/2")]
    Half,
}

impl Lambda {
    /// `ε = 2λ`
    pub fn epsilon(self) -> i64 {
        match self {
            Lambda::Zero => 0,
            Lambda::Half => 1,
        }
    }
}

impl std::str::FromStr for Lambda {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0" => Ok(Lambda::Zero),
            "1/2" | "0.5" => Ok(Lambda::Half),
            _ => Err(Error::Parse(format!("λ must be 0 or 1/2, got {s:?}"))),
        }
    }
}

/// `γ(x) = [[1, x], [1, 1]]` for `x` over `F`.
#[derive(Debug, Clone)]
pub struct LinearRep {
    pub x: Matrix,
    pub lambda: Lambda,
}

/// `g(x) = 1 + xϖ` for `x` over `E`, with `ϖ² = π^ε`.
#[derive(Debug, Clone)]
pub struct QuaternionRep {
    pub x: Matrix,
    pub lambda: Lambda,
}

impl LinearRep {
    pub fn new(x: Matrix, lambda: Lambda) -> Result<Self> {
        if !x.is_square() {
            return Err(Error::DimensionMismatch("x must be square".into()));
        }
        if x.field().degree() != 1 {
            return Err(Error::WrongField("γ(x) needs x over F".into()));
        }
        Ok(LinearRep { x, lambda })
    }

    pub fn rank(&self) -> usize {
        self.x.rows()
    }

    pub fn q(&self) -> u64 {
        self.x.field().order() as u64
    }

    /// `Inv(γ(x); T) = char(x; T)`.
    pub fn invariant(&self) -> Result<MonicPoly> {
        MonicPoly::from_coeffs(self.x.field(), self.x.charpoly())
    }
}

impl QuaternionRep {
    pub fn new(x: Matrix, lambda: Lambda) -> Result<Self> {
        if !x.is_square() {
            return Err(Error::DimensionMismatch("x must be square".into()));
        }
        if x.field().degree() != 2 {
            return Err(Error::WrongField("g(x) needs x over E".into()));
        }
        Ok(QuaternionRep { x, lambda })
    }

    pub fn rank(&self) -> usize {
        self.x.rows()
    }

    pub fn q(&self) -> u64 {
        self.x.field().prime_field().order() as u64
    }

    /// `x σ(x)`
    pub fn norm_matrix(&self) -> Result<Matrix> {
        Ok(self.x.mul(&self.x.sigma()?))
    }

    /// `z_g² = x σ(x) π^ε`
    pub fn z_squared(&self) -> Result<Matrix> {
        let y = self.norm_matrix()?;
        let gf = y.field();
        Ok(y.scale(&LocalElement::t_pow(gf, self.lambda.epsilon())))
    }

    /// `Inv(g(x); T) = char(xσ(x)π^ε; T)` over `F`.
    pub fn invariant(&self) -> Result<MonicPoly> {
        let z2 = self.z_squared()?;
        let coeffs = z2
            .charpoly()
            .iter()
            .map(|c| c.to_base())
            .collect::<Result<Vec<_>>>()?;
        MonicPoly::from_coeffs(z2.field().prime_field(), coeffs)
    }
}

/// `δ` separable with `δ(0) δ(1) ≠ 0`.
pub(crate) fn check_regular(delta: &MonicPoly) -> Result<()> {
    if delta.coeff(0).is_zero() {
        return Err(Error::NotRegular("Inv(0) = 0".into()));
    }
    let at_one = delta.poly().eval(&LocalElement::one(delta.field()));
    if at_one.is_zero() {
        return Err(Error::NotRegular("Inv(1) = 0".into()));
    }
    if !is_separable(delta)? {
        return Err(Error::NotSeparable);
    }
    Ok(())
}

/// Characteristic polynomial in `T^n + t O[T]`.
pub(crate) fn is_topologically_nilpotent(p: &MonicPoly) -> bool {
    (0..p.degree()).all(|i| {
        let c = p.coeff(i);
        c.is_zero() || c.valuation_or_bound() >= 1
    })
}

/// Agreement of the block and index formulas over the enumerated pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct TransferCheck {
    pub orientation: Orientation,
    pub pairs: usize,
    pub agreeing: usize,
}

impl TransferCheck {
    pub fn all_agree(&self) -> bool {
        self.pairs == self.agreeing
    }
}

/// A value with the window certificates of the enumerations behind it.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Certified<T> {
    pub value: T,
    pub certificates: Vec<Certificate>,
    pub transfer: Option<TransferCheck>,
}

impl<T> Certified<T> {
    fn bare(value: T) -> Self {
        Certified {
            value,
            certificates: Vec::new(),
            transfer: None,
        }
    }

    fn from_list<R>(value: T, list: &OrbitList<R>) -> Self {
        Certified {
            value,
            certificates: vec![list.certificate],
            transfer: None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Certified<U> {
        Certified {
            value: f(self.value),
            certificates: self.certificates,
            transfer: self.transfer,
        }
    }
}

/// Sum of transfer factors over the pair classes of `y`, for `γ(x)`.
fn pair_sum(rep: &LinearRep, y: &Matrix, cfg: &EnumConfig) -> Result<Certified<QsLaurent>> {
    let list = enum_pairs_with(y, cfg)?;
    let orientation = Orientation::default();
    let terms: Vec<(QsLaurent, bool)> = list
        .representatives
        .par_iter()
        .map(|p| {
            let block = transfer_factor(rep, p)?;
            let index = transfer_factor_indices(rep, p, orientation)?;
            let agree = block == index;
            Ok((block, agree))
        })
        .collect::<Result<_>>()?;
    let total = terms
        .iter()
        .fold(QsLaurent::zero(rep.q()), |acc, (t, _)| &acc + t);
    let value = total
        .div_exact(list.gamma_index as i64)
        .expect("transfer factors are constant on Γ-classes");
    let agreeing = terms.iter().filter(|(_, a)| *a).count();
    let mut out = Certified::from_list(value, &list);
    out.transfer = Some(TransferCheck {
        orientation,
        pairs: terms.len(),
        agreeing,
    });
    Ok(out)
}

/// [`orb_linear`] with certificates and the transfer-factor cross-check.
pub fn orb_linear_certified(rep: &LinearRep, cfg: &EnumConfig) -> Result<Certified<QsLaurent>> {
    check_regular(&rep.invariant()?)?;
    match rep.lambda {
        Lambda::Half => {
            let n = rep.rank() as i64;
            Ok(par_sum(rep, cfg)?.map(|p| p.shift(-n)))
        }
        Lambda::Zero => {
            if !is_topologically_nilpotent(&rep.invariant()?) {
                return Err(Error::NotNilpotent);
            }
            pair_sum(rep, &rep.x, cfg)
        }
    }
}

fn par_sum(rep: &LinearRep, cfg: &EnumConfig) -> Result<Certified<QsLaurent>> {
    let y = rep.x.scale(&LocalElement::t_pow(rep.x.field(), -1));
    pair_sum(rep, &y, cfg)
}

pub fn orb_linear_with(rep: &LinearRep, cfg: &EnumConfig) -> Result<QsLaurent> {
    Ok(orb_linear_certified(rep, cfg)?.value)
}

/// `Orb(γ(x), f'_λ, s)`: λ = 1/2 sums over pairs for `x/π` with the prefactor
/// `q^{-ns}`, λ = 0 sums over pairs for `x`.
pub fn orb_linear(rep: &LinearRep) -> Result<QsLaurent> {
    orb_linear_with(rep, &EnumConfig::default())
}

/// `Orb(γ, 1_Par, s)`, the pair sum for `x/π` without the prefactor.
pub fn orb_par_certified(rep: &LinearRep, cfg: &EnumConfig) -> Result<Certified<QsLaurent>> {
    if rep.lambda != Lambda::Half {
        return Err(Error::Unsupported(
            "the parahoric normalization is defined for λ = 1/2".into(),
        ));
    }
    check_regular(&rep.invariant()?)?;
    par_sum(rep, cfg)
}

pub fn orb_par_with(rep: &LinearRep, cfg: &EnumConfig) -> Result<QsLaurent> {
    Ok(orb_par_certified(rep, cfg)?.value)
}

pub fn orb_par(rep: &LinearRep) -> Result<QsLaurent> {
    orb_par_with(rep, &EnumConfig::default())
}

pub fn orb_quaternion_certified(rep: &QuaternionRep, cfg: &EnumConfig) -> Result<Certified<u64>> {
    let delta = rep.invariant()?;
    check_regular(&delta)?;
    let y = rep.norm_matrix()?;
    let norm_poly = crate::enumerate::charpoly_over_base(&y)?;
    match rep.lambda {
        Lambda::Half => {
            if !norm_poly.poly().is_integral() {
                return Ok(Certified::bare(0));
            }
        }
        Lambda::Zero => {
            if !is_topologically_nilpotent(&norm_poly) {
                return Err(Error::NotNilpotent);
            }
        }
    }
    let list = enum_sigma_with(&rep.x, cfg)?;
    Ok(Certified::from_list(list.class_count(), &list))
}

pub fn orb_quaternion_with(rep: &QuaternionRep, cfg: &EnumConfig) -> Result<u64> {
    Ok(orb_quaternion_certified(rep, cfg)?.value)
}

/// `Orb(g(x), 1_{GL_n(O_B)})` as the weighted count of lattices with `xσ(Λ) ⊆ Λ`.
pub fn orb_quaternion(rep: &QuaternionRep) -> Result<u64> {
    orb_quaternion_with(rep, &EnumConfig::default())
}

pub fn orb_conjugation_certified(x: &Matrix, cfg: &EnumConfig) -> Result<Certified<u64>> {
    if x.field().degree() != 1 {
        return Err(Error::WrongField(
            "conjugation integrals need x over F".into(),
        ));
    }
    let list = enum_stable_with(x, cfg)?;
    Ok(Certified::from_list(list.class_count(), &list))
}

pub fn orb_conjugation_with(x: &Matrix, cfg: &EnumConfig) -> Result<u64> {
    Ok(orb_conjugation_certified(x, cfg)?.value)
}

/// `Orb(x, 1_{GL_n(O_F)})`: the weighted count of `x`-stable lattices.
pub fn orb_conjugation(x: &Matrix) -> Result<u64> {
    orb_conjugation_with(x, &EnumConfig::default())
}

pub fn orb_twisted_certified(x: &Matrix, cfg: &EnumConfig) -> Result<Certified<u64>> {
    if x.field().degree() != 2 {
        return Err(Error::WrongField("twisted integrals need x over E".into()));
    }
    if x.det().valuation()? != 0 {
        return Ok(Certified::bare(0));
    }
    let list = enum_sigma_fixed_with(x, cfg)?;
    Ok(Certified::from_list(list.class_count(), &list))
}

pub fn orb_twisted_with(x: &Matrix, cfg: &EnumConfig) -> Result<u64> {
    Ok(orb_twisted_certified(x, cfg)?.value)
}

/// `Orb^σ(x)`: the weighted count of lattices with `xσ(Λ) = Λ`.
pub fn orb_twisted(x: &Matrix) -> Result<u64> {
    orb_twisted_with(x, &EnumConfig::default())
}
