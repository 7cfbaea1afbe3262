//! The torus `L_x^× = F[y]^×` acting on lattices: idempotents, the lattice
//! `Γ'` generated by `t` in each field factor, and normal forms modulo `Γ'`.

use crate::error::{Error, Result};
use crate::lattice::LatticeBasis;
use crate::localfield::{LocalElement, Matrix};
use crate::polyfactor::{
    is_separable, newton_profile, roots_in_field, FactorProfile, MonicPoly, Poly,
};

/// One field factor `L_j` of `F[y]`.
#[derive(Debug, Clone)]
pub struct TorusFactor {
    /// Ramification index over `F`.
    pub e: u32,
    /// Residue degree over `F`.
    pub f: u32,
    /// The root of the characteristic polynomial when `L_j = F`.
    pub root: Option<LocalElement>,
}

impl TorusFactor {
    pub fn degree(&self) -> u32 {
        self.e * self.f
    }
}

/// `F[y]` for a regular semi-simple `y`, with the data needed to enumerate
/// lattices up to the action of `L_x^×`.
#[derive(Debug, Clone)]
pub struct TorusData {
    pub charpoly: MonicPoly,
    pub profile: FactorProfile,
    pub factors: Vec<TorusFactor>,
    /// Idempotent of each factor as a matrix, known modulo `t^precision`.
    pub idempotents: Vec<Matrix>,
    /// `1 + (t - 1) e_j`: multiplication by `t` on the factor `L_j`.
    pub generators: Vec<Matrix>,
    pub precision: i64,
}

/// Characteristic polynomial of `y`, over `F` when `base` is set and over the
/// field of `y` otherwise.
pub(crate) fn charpoly_over(y: &Matrix, base: bool) -> Result<MonicPoly> {
    let cp = y.charpoly();
    if base {
        let coeffs = cp.iter().map(|c| c.to_base()).collect::<Result<Vec<_>>>()?;
        MonicPoly::from_coeffs(y.field().prime_field(), coeffs)
    } else {
        MonicPoly::from_coeffs(y.field(), cp)
    }
}

/// [`torus_data_to`] at the default precision.
pub fn torus_data(y: &Matrix) -> Result<TorusData> {
    torus_data_to(y, crate::localfield::DEFAULT_PRECISION)
}

/// Torus data for the algebra generated by `y` over its own field, with
/// idempotents correct modulo `t^prec`.
pub fn torus_data_to(y: &Matrix, prec: i64) -> Result<TorusData> {
    torus_data_over(y, false, prec)
}

/// Torus data for `F[y]` with `y` over `E` whose characteristic polynomial
/// has coefficients in `F`.
pub(crate) fn torus_data_over(y: &Matrix, base: bool, prec: i64) -> Result<TorusData> {
    if !y.is_square() {
        return Err(Error::DimensionMismatch(
            "torus data needs a square matrix".into(),
        ));
    }
    let charpoly = charpoly_over(y, base)?;
    if charpoly.coeff(0).is_zero() {
        return Err(Error::NotRegular("singular matrix".into()));
    }
    if !is_separable(&charpoly)? {
        return Err(Error::NotSeparable);
    }
    let profile = newton_profile(&charpoly)?;
    let split = profile.entries.iter().filter(|e| e.d() == 1).count();
    let other: Vec<_> = profile.entries.iter().filter(|e| e.d() > 1).collect();
    if other.len() > 1 {
        return Err(Error::Unsupported("more than one non-split factor".into()));
    }
    let disc = charpoly.poly().discriminant_resultant().valuation()?;
    let mut extra = disc + 8;
    for _ in 0..6 {
        let data = build(
            y,
            &charpoly,
            &profile,
            split,
            other.first().map(|e| (e.e, e.f)),
            prec,
            extra,
        )?;
        if data.precision >= prec {
            return Ok(data);
        }
        extra += (prec - data.precision).max(8);
    }
    Err(Error::InsufficientPrecision(format!(
        "idempotents not resolved to t^{prec}"
    )))
}

fn build(
    y: &Matrix,
    charpoly: &MonicPoly,
    profile: &FactorProfile,
    split: usize,
    other: Option<(u32, u32)>,
    prec: i64,
    extra: i64,
) -> Result<TorusData> {
    let gf = y.field();
    let n = y.rows();
    let lift = |p: &Poly| {
        if gf.degree() == 2 {
            p.to_quadratic()
        } else {
            p.clone()
        }
    };
    let roots: Vec<LocalElement> = roots_in_field(charpoly, prec + extra)?
        .into_iter()
        .map(|r| r.truncate(prec + extra))
        .collect();
    if roots.len() != split {
        return Err(Error::ProfileIncomplete(format!(
            "found {} roots, expected {split}",
            roots.len()
        )));
    }
    let mut factors = Vec::new();
    let mut idempotents = Vec::new();
    let mut sum = Matrix::zeros(gf, n, n);
    for a in &roots {
        let (r, _) = charpoly.poly().divrem_monic(&Poly::linear(a));
        let c = r.eval(a).inv(prec + 2 * extra)?;
        let r = if gf == charpoly.field() { r } else { lift(&r) };
        let e = r.eval_matrix(y).scale(&c.in_field(gf)?);
        sum = sum.add(&e);
        idempotents.push(e);
        factors.push(TorusFactor {
            e: 1,
            f: 1,
            root: Some(a.clone()),
        });
    }
    if let Some((e, f)) = other {
        idempotents.push(Matrix::identity(gf, n).sub(&sum));
        factors.push(TorusFactor { e, f, root: None });
    }
    let precision = idempotents
        .iter()
        .flat_map(|m| m.entries().iter().filter_map(|x| x.precision()))
        .min()
        .unwrap_or(i64::MAX)
        .min(prec + extra);
    let idempotents: Vec<Matrix> = idempotents.iter().map(|m| m.truncate(precision)).collect();
    let t_minus_one = LocalElement::from_int_terms(gf, &[(0, -1), (1, 1)]);
    let generators = idempotents
        .iter()
        .map(|e| Matrix::identity(gf, n).add(&e.scale(&t_minus_one)))
        .collect();
    Ok(TorusData {
        charpoly: charpoly.clone(),
        profile: profile.clone(),
        factors,
        idempotents,
        generators,
        precision,
    })
}

impl TorusData {
    pub fn rank(&self) -> usize {
        self.charpoly.degree()
    }

    /// `[Γ : Γ']` where `Γ` is generated by uniformizers of the factors.
    pub fn gamma_index(&self) -> u64 {
        self.factors.iter().map(|f| f.e as u64).product()
    }

    /// `v(det)` of `e_j Λ ⊕ (1 - e_j) O^n` for each factor `j`.
    ///
    /// Multiplication by `t` on the factor `j` raises the `j`-th entry by the
    /// degree of that factor and fixes the others; units fix all of them.
    pub fn psi(&self, lat: &LatticeBasis) -> Result<Vec<i64>> {
        let n = self.rank();
        let gf = lat.field();
        let floor = lat.floor().max(0);
        let cols = lat.columns();
        self.idempotents
            .iter()
            .map(|e| {
                let e = e.in_field_of(gf)?;
                let comp = Matrix::identity(gf, n).sub(&e);
                let mut gens: Vec<Vec<LocalElement>> = cols.iter().map(|c| e.mul_vec(c)).collect();
                gens.extend(comp.columns());
                Ok(LatticeBasis::with_floor(&gens, floor)?.volume())
            })
            .collect()
    }

    /// The representative of the `Γ'`-orbit of `lat` with `0 <= ψ_j < d_j`.
    pub fn normalize(&self, lat: &LatticeBasis) -> Result<LatticeBasis> {
        let psi = self.psi(lat)?;
        let shifts: Vec<i64> = psi
            .iter()
            .zip(&self.factors)
            .map(|(&p, f)| p.div_euclid(f.degree() as i64))
            .collect();
        if shifts.iter().all(|&m| m == 0) {
            return Ok(lat.clone());
        }
        let gf = lat.field();
        let n = self.rank();
        let mut h = Matrix::identity(gf, n);
        for (e, &m) in self.idempotents.iter().zip(&shifts) {
            if m != 0 {
                let c = &LocalElement::t_pow(gf, -m) - &LocalElement::one(gf);
                h = h.add(&e.in_field_of(gf)?.scale(&c));
            }
        }
        lat.apply(&h)
    }

    /// Whether `e_j^2 = e_j`, `e_i e_j = 0` and `Σ e_j = 1` modulo `t^k`.
    pub fn idempotents_hold_to(&self, k: i64) -> bool {
        let n = self.rank();
        let close = |m: &Matrix| {
            m.entries()
                .iter()
                .all(|x| x.is_zero() || x.valuation_or_bound() >= k)
        };
        let gf = self.idempotents[0].field();
        let mut sum = Matrix::zeros(gf, n, n);
        for (i, a) in self.idempotents.iter().enumerate() {
            sum = sum.add(a);
            for (j, b) in self.idempotents.iter().enumerate() {
                let prod = a.mul(b);
                let target = if i == j {
                    a.clone()
                } else {
                    Matrix::zeros(gf, n, n)
                };
                if !close(&prod.sub(&target)) {
                    return false;
                }
            }
        }
        close(&sum.sub(&Matrix::identity(gf, n)))
    }
}

trait InField {
    fn in_field_of(&self, gf: &'static crate::localfield::Gf) -> Result<Matrix>;
}

impl InField for Matrix {
    fn in_field_of(&self, gf: &'static crate::localfield::Gf) -> Result<Matrix> {
        if self.field() == gf {
            Ok(self.clone())
        } else {
            self.try_map(|x| x.in_field(gf))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::Gf;

    fn t(gf: &'static Gf, k: i64) -> LocalElement {
        LocalElement::t_pow(gf, k)
    }

    fn agrees(a: &Matrix, b: &Matrix, k: i64) -> bool {
        a.sub(b)
            .entries()
            .iter()
            .all(|x| x.is_zero() || x.valuation_or_bound() >= k)
    }

    #[test]
    fn diagonal_two_factors() {
        let gf = Gf::get(3, 1).unwrap();
        let x = Matrix::diagonal(gf, &[t(gf, 1), t(gf, 2)]);
        let td = torus_data(&x).unwrap();
        assert_eq!(td.factors.len(), 2);
        assert_eq!(td.gamma_index(), 1);
        let one = LocalElement::one(gf);
        let expected = [
            Matrix::diagonal(gf, &[t(gf, 1), one.clone()]),
            Matrix::diagonal(gf, &[one, t(gf, 1)]),
        ];
        for g in &td.generators {
            assert!(agrees(&g.mul(&x), &x.mul(g), td.precision));
            assert!(expected.iter().any(|e| agrees(g, e, td.precision)));
        }
        assert!(td.idempotents_hold_to(td.precision - 4));
    }

    #[test]
    fn scalar_rank_one() {
        let gf = Gf::get(5, 1).unwrap();
        let x = Matrix::scalar(gf, 1, &t(gf, 1));
        let td = torus_data(&x).unwrap();
        assert_eq!(td.generators.len(), 1);
        assert!(agrees(&td.generators[0], &x, td.precision));
    }

    #[test]
    fn repeated_eigenvalue_is_not_separable() {
        let gf = Gf::get(5, 1).unwrap();
        let x = Matrix::from_rows(
            gf,
            vec![
                vec![t(gf, 1), LocalElement::one(gf)],
                vec![LocalElement::zero(gf), t(gf, 1)],
            ],
        )
        .unwrap();
        assert!(matches!(torus_data(&x), Err(Error::NotSeparable)));
    }

    #[test]
    fn ramified_factor_and_normal_form() {
        // companion matrix of T^2 - t: one ramified factor
        let gf = Gf::get(3, 1).unwrap();
        let z = LocalElement::zero(gf);
        let x = Matrix::from_rows(
            gf,
            vec![vec![z.clone(), t(gf, 1)], vec![LocalElement::one(gf), z]],
        )
        .unwrap();
        let td = torus_data(&x).unwrap();
        assert_eq!(td.gamma_index(), 2);
        let o = LatticeBasis::standard(gf, 2);
        for k in -3..4 {
            assert_eq!(td.normalize(&o.scale_t(k)).unwrap(), o);
        }
        let xo = o.apply(&x).unwrap();
        let nx = td.normalize(&xo).unwrap();
        assert_eq!(td.psi(&nx).unwrap(), vec![1]);
        assert_eq!(nx, xo);
    }

    #[test]
    fn mixed_split_and_unramified() {
        // diag(1, companion of T^2 - 2): the second factor is unramified of degree 2
        let gf = Gf::get(3, 1).unwrap();
        let one = LocalElement::one(gf);
        let z = LocalElement::zero(gf);
        let x = Matrix::from_rows(
            gf,
            vec![
                vec![one.clone(), z.clone(), z.clone()],
                vec![z.clone(), z.clone(), LocalElement::from_int(gf, 2)],
                vec![z.clone(), one, z],
            ],
        )
        .unwrap();
        let td = torus_data(&x).unwrap();
        assert_eq!(td.factors.len(), 2);
        assert!(td.idempotents_hold_to(td.precision - 4));
        let o = LatticeBasis::standard(gf, 3);
        let moved = o
            .apply(&td.generators[1])
            .unwrap()
            .apply(&td.generators[1])
            .unwrap();
        assert_eq!(td.psi(&moved).unwrap(), vec![0, 4]);
        assert_eq!(td.normalize(&moved).unwrap(), o);
    }
}
