//! Suite evaluation: both sides of each identity, computed exactly.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::instance::{OrbitInstance, Suite};
use crate::enumerate::{Certificate, EnumConfig};
use crate::error::{Error, Result};
use crate::invariant::{
    epsilon_sign, inv_linear, inv_quaternion, match_test, matching_exists, ord_lambda,
    shift_invariant, ShiftClass,
};
use crate::localfield::{Gf, LocalElement, Matrix};
use crate::orbital::{
    orb_conjugation_certified, orb_linear_certified, orb_par_certified, orb_quaternion_certified,
    orb_twisted_certified, Certified, Lambda, LinearRep, QsLaurent, QuaternionRep, TransferCheck,
};
use crate::polyfactor::{hensel_split, MonicPoly};

/// Result of evaluating one suite once.
#[derive(Debug, Clone)]
pub(crate) enum Outcome {
    Skip(String),
    Compared(Comparison),
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Comparison {
    pub pass: bool,
    pub reason: Option<String>,
    pub values: BTreeMap<String, Value>,
    pub certificates: Vec<Certificate>,
    pub transfer: Option<TransferCheck>,
}

/// Collects certificates and transfer checks across the integrals of one comparison.
struct Ctx {
    cfg: EnumConfig,
    out: Comparison,
}

fn laurent_json(p: &QsLaurent) -> Value {
    json!({ "poly": p, "value": p.central_value(), "derivative_log_q": p.central_derivative() })
}

impl Ctx {
    fn absorb<T>(&mut self, c: Certified<T>) -> T {
        self.out.certificates.extend(c.certificates);
        if let Some(t) = c.transfer {
            let acc = self.out.transfer.get_or_insert(TransferCheck {
                orientation: t.orientation,
                pairs: 0,
                agreeing: 0,
            });
            acc.pairs += t.pairs;
            acc.agreeing += t.agreeing;
        }
        c.value
    }

    fn linear(&mut self, x: &Matrix, lambda: Lambda) -> Result<QsLaurent> {
        let c = orb_linear_certified(&LinearRep::new(x.clone(), lambda)?, &self.cfg)?;
        Ok(self.absorb(c))
    }

    fn par(&mut self, x: &Matrix) -> Result<QsLaurent> {
        let c = orb_par_certified(&LinearRep::new(x.clone(), Lambda::Half)?, &self.cfg)?;
        Ok(self.absorb(c))
    }

    fn quaternion(&mut self, x: &Matrix, lambda: Lambda) -> Result<u64> {
        let c = orb_quaternion_certified(&QuaternionRep::new(x.clone(), lambda)?, &self.cfg)?;
        Ok(self.absorb(c))
    }

    fn conjugation(&mut self, x: &Matrix) -> Result<u64> {
        let c = orb_conjugation_certified(x, &self.cfg)?;
        Ok(self.absorb(c))
    }

    fn twisted(&mut self, x: &Matrix) -> Result<u64> {
        let c = orb_twisted_certified(x, &self.cfg)?;
        Ok(self.absorb(c))
    }

    fn put(&mut self, key: &str, v: Value) {
        self.out.values.insert(key.to_string(), v);
    }

    fn check(&mut self, ok: bool, what: &str) {
        if !ok && self.out.reason.is_none() {
            self.out.reason = Some(what.to_string());
        }
        self.out.pass &= ok;
    }
}

/// Errors that mean the instance is outside the suite's hypotheses.
fn is_precondition(e: &Error) -> bool {
    matches!(
        e,
        Error::NotRegular(_) | Error::NotSeparable | Error::NotNilpotent | Error::Unsupported(_)
    )
}

pub(crate) fn evaluate(inst: &OrbitInstance, suite: Suite, cfg: &EnumConfig) -> Outcome {
    let mut ctx = Ctx {
        cfg: *cfg,
        out: Comparison {
            pass: true,
            ..Default::default()
        },
    };
    let res = (|| -> Result<Option<String>> {
        let lin = inst.linear_matrix()?;
        let quat = inst.quaternion_matrix()?;
        match suite {
            Suite::Fl => fl(&mut ctx, inst.lambda, lin, quat),
            Suite::Reduction => reduction(&mut ctx, lin, quat),
            Suite::FuncEq => func_eq(&mut ctx, inst.lambda, lin),
            Suite::Vanish => vanish(&mut ctx, inst.lambda, lin),
            Suite::Factor => factor(&mut ctx, lin, quat),
            Suite::Edge => edge(&mut ctx, lin, quat),
            Suite::Par => par(&mut ctx, inst.lambda, lin, quat),
        }
    })();
    match res {
        Ok(None) => Outcome::Compared(ctx.out),
        Ok(Some(skip)) => Outcome::Skip(skip),
        Err(e) if is_precondition(&e) => Outcome::Skip(format!("outside hypotheses: {e}")),
        Err(e) => {
            ctx.out.pass = false;
            ctx.out.reason = Some(format!("evaluation error: {e}"));
            Outcome::Compared(ctx.out)
        }
    }
}

fn t_pow(gf: &'static Gf, k: i64) -> LocalElement {
    LocalElement::t_pow(gf, k)
}

/// `x = t^k u` over `E` with `Nm(x) π^ε = a`, when the unit part of `a` is a constant.
fn norm_preimage(a: &LocalElement, lambda: Lambda) -> Result<Option<LocalElement>> {
    let v = a.valuation()? - lambda.epsilon();
    if v.rem_euclid(2) != 0 || !a.is_monomial() || !a.is_exact() {
        return Ok(None);
    }
    let f = a.field();
    let e = f.quadratic();
    let c = a.leading_coefficient().expect("nonzero");
    let u = e
        .nonzero()
        .find(|&u| e.norm(u) == c)
        .expect("the residue norm is surjective");
    Ok(Some(LocalElement::monomial(e, u, v / 2)))
}

fn fl(
    ctx: &mut Ctx,
    lambda: Lambda,
    lin: Option<Matrix>,
    quat: Option<Matrix>,
) -> Result<Option<String>> {
    let (lin, quat) = match (lin, quat) {
        (lin, Some(q)) => {
            let delta = inv_quaternion(&q, lambda)?;
            let lin = match lin {
                Some(x) => {
                    if !match_test(&inv_linear(&x)?, &delta)? {
                        return Ok(Some(
                            "supplied linear and quaternionic sides do not match".into(),
                        ));
                    }
                    x
                }
                None => delta.delta.companion(),
            };
            (lin, Some(q))
        }
        (Some(x), None) => {
            let delta = inv_linear(&x)?;
            if !matching_exists(&delta, lambda)? {
                (x, None)
            } else if x.rows() == 1 {
                match norm_preimage(x.get(0, 0), lambda)? {
                    Some(u) => {
                        let q = Matrix::scalar(u.field(), 1, &u);
                        (x, Some(q))
                    }
                    None => {
                        return Ok(Some(
                            "comparand norm equation has no terminating solution".into(),
                        ))
                    }
                }
            } else {
                return Ok(Some(
                    "quaternionic comparand is only constructed for n = 1".into(),
                ));
            }
        }
        (None, None) => unreachable!("validated instances carry a matrix"),
    };
    let delta = inv_linear(&lin)?;
    let exists = matching_exists(&delta, lambda)?;
    let orb = ctx.linear(&lin, lambda)?;
    ctx.put("linear", laurent_json(&orb));
    ctx.put("matching_exists", json!(exists));
    ctx.put("ord", json!(ord_lambda(&delta, lambda)?));
    match quat {
        Some(q) => {
            let count = ctx.quaternion(&q, lambda)?;
            ctx.put("quaternion", json!(count));
            ctx.check(exists, "a matching element exists but ord_λ ≠ 0");
            ctx.check(
                orb.central_value() == count as i64,
                "central value differs from the quaternionic count",
            );
        }
        None => ctx.check(
            orb.central_value() == 0,
            "no matching element but the central value is nonzero",
        ),
    }
    Ok(None)
}

fn norm_charpoly(x: &Matrix) -> Result<MonicPoly> {
    crate::enumerate::charpoly_over_base(&x.mul(&x.sigma()?))
}

fn is_top_nilpotent(p: &MonicPoly) -> bool {
    (0..p.degree()).all(|i| p.coeff(i).valuation_or_bound() >= 1)
}

fn reduction(ctx: &mut Ctx, lin: Option<Matrix>, quat: Option<Matrix>) -> Result<Option<String>> {
    let mut ran = false;
    if let Some(x) = lin {
        let shifted = shift_invariant(&inv_linear(&x)?)?;
        if shifted.class == ShiftClass::TopNilpotent {
            let xt = x.scale(&t_pow(x.field(), -1));
            let a = ctx.linear(&x, Lambda::Half)?;
            let b = ctx.linear(&xt, Lambda::Zero)?;
            ctx.put("linear_half", laurent_json(&a));
            ctx.put("linear_zero_shifted", laurent_json(&b));
            ctx.check(a == b, "Orb(γ, f'_1/2) ≠ Orb(γ̃, f'_0)");
            ran = true;
        }
    }
    if let Some(x) = quat {
        if is_top_nilpotent(&norm_charpoly(&x)?) {
            let a = ctx.quaternion(&x, Lambda::Half)?;
            let b = ctx.quaternion(&x, Lambda::Zero)?;
            ctx.put("quaternion_half", json!(a));
            ctx.put("quaternion_zero", json!(b));
            ctx.check(a == b, "Orb(g, f_1/2) ≠ Orb(g̃, f_0)");
            ran = true;
        }
    }
    Ok((!ran).then(|| "invariant is not topologically nilpotent after the shift".into()))
}

fn need_half(lambda: Lambda) -> Option<String> {
    (lambda != Lambda::Half).then(|| "suite concerns λ = 1/2".into())
}

fn func_eq(ctx: &mut Ctx, lambda: Lambda, lin: Option<Matrix>) -> Result<Option<String>> {
    if let Some(s) = need_half(lambda) {
        return Ok(Some(s));
    }
    let Some(x) = lin else {
        return Ok(Some("needs a linear matrix".into()));
    };
    let delta = inv_linear(&x)?;
    let eps = epsilon_sign(&delta)?;
    let ord = ord_lambda(&delta, Lambda::Half)?;
    let orb = ctx.linear(&x, Lambda::Half)?;
    ctx.put("linear", laurent_json(&orb));
    ctx.put("epsilon", json!(eps));
    ctx.put("ord", json!(ord));
    let symmetric = orb.terms().all(|(k, c)| orb.coeff(-k) == eps * c);
    ctx.check(symmetric, "c_{-k} ≠ ε c_k");
    ctx.check(eps == if ord % 2 == 0 { 1 } else { -1 }, "ε ≠ (-1)^ord");
    Ok(None)
}

fn vanish(ctx: &mut Ctx, lambda: Lambda, lin: Option<Matrix>) -> Result<Option<String>> {
    if let Some(s) = need_half(lambda) {
        return Ok(Some(s));
    }
    let Some(x) = lin else {
        return Ok(Some("needs a linear matrix".into()));
    };
    let ord = ord_lambda(&inv_linear(&x)?, Lambda::Half)?;
    let orb = ctx.linear(&x, Lambda::Half)?;
    let order = orb.vanishing_order();
    ctx.put("linear", laurent_json(&orb));
    ctx.put("ord", json!(ord));
    ctx.put("vanishing_order", json!(order));
    ctx.check(
        order.is_none_or(|o| o >= ord),
        "vanishing order below ord_1/2",
    );
    Ok(None)
}

/// `π · companion(P)`, whose characteristic polynomial is `π^d P(T/π)`.
fn scaled_companion(p: &MonicPoly) -> Matrix {
    p.companion().scale(&t_pow(p.field(), 1))
}

/// A visible block split `diag(x_0, x_1)` with `x_0σ(x_0)` topologically nilpotent
/// and `x_1σ(x_1)` integrally invertible.
fn quaternion_blocks(x: &Matrix) -> Result<Option<(Matrix, Matrix)>> {
    let n = x.rows();
    for k in 1..n {
        let off_zero =
            (0..k).all(|i| (k..n).all(|j| x.get(i, j).is_zero() && x.get(j, i).is_zero()));
        if !off_zero {
            continue;
        }
        let x0 = x.submatrix(0, k, 0, k);
        let x1 = x.submatrix(k, n, k, n);
        let (p0, p1) = (norm_charpoly(&x0)?, norm_charpoly(&x1)?);
        let unit = p1.poly().is_integral() && p1.coeff(0).valuation_or_bound() == 0;
        if is_top_nilpotent(&p0) && unit {
            return Ok(Some((x0, x1)));
        }
        if is_top_nilpotent(&p1) && p0.poly().is_integral() && p0.coeff(0).valuation_or_bound() == 0
        {
            return Ok(Some((x1, x0)));
        }
    }
    Ok(None)
}

fn factor(ctx: &mut Ctx, lin: Option<Matrix>, quat: Option<Matrix>) -> Result<Option<String>> {
    let mut ran = false;
    if let Some(x) = lin {
        let shifted = shift_invariant(&inv_linear(&x)?)?;
        if shifted.class != ShiftClass::NonIntegral {
            let (p0, p1) = hensel_split(&shifted.profile.delta)?;
            let exact = p0.poly().is_exact() && p1.poly().is_exact();
            if exact && p0.degree() > 0 && p1.degree() > 0 {
                let whole = ctx.linear(&x, Lambda::Half)?;
                let a = ctx.linear(&scaled_companion(&p0), Lambda::Half)?;
                let b = ctx.linear(&scaled_companion(&p1), Lambda::Half)?;
                let prod = &a * &b;
                ctx.put("linear", laurent_json(&whole));
                ctx.put("linear_nilpotent_part", laurent_json(&a));
                ctx.put("linear_unit_part", laurent_json(&b));
                ctx.check(
                    whole == prod,
                    "orbital integral is not the product of its parts",
                );
                ran = true;
            }
        }
    }
    if let Some(x) = quat {
        if norm_charpoly(&x)?.poly().is_integral() {
            if let Some((x0, x1)) = quaternion_blocks(&x)? {
                let whole = ctx.quaternion(&x, Lambda::Half)?;
                let a = ctx.quaternion(&x0, Lambda::Half)?;
                let b = ctx.quaternion(&x1, Lambda::Half)?;
                ctx.put("quaternion", json!(whole));
                ctx.put("quaternion_nilpotent_part", json!(a));
                ctx.put("quaternion_unit_part", json!(b));
                ctx.check(
                    whole == a * b,
                    "quaternionic count is not the product of its parts",
                );
                ran = true;
            }
        }
    }
    Ok((!ran).then(|| "no mixed nilpotent and unit split".into()))
}

fn edge(ctx: &mut Ctx, lin: Option<Matrix>, quat: Option<Matrix>) -> Result<Option<String>> {
    let mut ran = false;
    if let Some(x) = lin {
        let xt = x.scale(&t_pow(x.field(), -1));
        let p = MonicPoly::from_coeffs(x.field(), xt.charpoly())?;
        if p.poly().is_integral() && p.coeff(0).valuation_or_bound() == 0 {
            let orb = ctx.linear(&x, Lambda::Half)?;
            let conj = ctx.conjugation(&xt)?;
            ctx.put("linear", laurent_json(&orb));
            ctx.put("conjugation", json!(conj));
            ctx.check(
                orb == QsLaurent::constant(orb.q(), conj as i64),
                "Orb(γ, f'_1/2) ≠ Orb(x̃, 1)",
            );
            ran = true;
        }
    }
    if let Some(x) = quat {
        let p = norm_charpoly(&x)?;
        if p.poly().is_integral() && p.coeff(0).valuation_or_bound() == 0 {
            let a = ctx.quaternion(&x, Lambda::Half)?;
            let b = ctx.twisted(&x)?;
            ctx.put("quaternion", json!(a));
            ctx.put("twisted", json!(b));
            ctx.check(a == b, "Orb(g, f_1/2) ≠ Orb^σ(x)");
            ran = true;
        }
    }
    Ok((!ran).then(|| "no integrally invertible reduction".into()))
}

fn par(
    ctx: &mut Ctx,
    lambda: Lambda,
    lin: Option<Matrix>,
    quat: Option<Matrix>,
) -> Result<Option<String>> {
    if let Some(s) = need_half(lambda) {
        return Ok(Some(s));
    }
    let Some(x) = lin else {
        return Ok(Some("needs a linear matrix".into()));
    };
    let n = x.rows() as i64;
    let p = ctx.par(&x)?;
    let f = ctx.linear(&x, Lambda::Half)?;
    ctx.put("parahoric", laurent_json(&p));
    ctx.put("linear", laurent_json(&f));
    ctx.check(f == p.shift(-n), "Orb(γ, f'_1/2) ≠ q^{-ns} Orb(γ, 1_Par)");
    if let Some(q) = quat {
        if match_test(&inv_linear(&x)?, &inv_quaternion(&q, Lambda::Half)?)? {
            let count = ctx.quaternion(&q, Lambda::Half)?;
            ctx.put("quaternion", json!(count));
            ctx.check(
                p.central_value() == count as i64,
                "Orb(γ, 1_Par, 0) ≠ Orb(g, 1)",
            );
        }
    }
    Ok(None)
}
