//! Deterministic pseudo-random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::instance::{to_payload, OrbitInstance, Side, Suite};
use crate::error::{Error, Result};
use crate::invariant::{inv_linear, inv_quaternion, InvariantProfile};
use crate::localfield::{Code, Gf, LocalElement, Matrix, SUPPORTED_PRIMES};
use crate::orbital::Lambda;
use crate::polyfactor::{MonicPoly, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    pub q: Vec<u32>,
    pub n: Vec<usize>,
    pub lambda: Vec<Lambda>,
    pub side: Side,
    /// Valuation range of the eigenvalue draws.
    pub vmin: i64,
    pub vmax: i64,
    pub count: usize,
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub precision: Option<i64>,
    pub window: Option<i64>,
    pub max_n: usize,
    /// Largest admitted valuation of the invariant's discriminant.
    pub max_disc: i64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            q: vec![2, 3],
            n: vec![1],
            lambda: vec![Lambda::Half],
            side: Side::Linear,
            vmin: -1,
            vmax: 4,
            count: 10,
            seed: 0,
            suites: Vec::new(),
            precision: None,
            window: None,
            max_n: 3,
            max_disc: 12,
        }
    }
}

fn list<T: std::str::FromStr>(v: &str) -> Result<Vec<T>> {
    v.split('|')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| Error::Parse(format!("bad list entry {s:?}")))
        })
        .collect()
}

fn one<T: std::str::FromStr>(v: &str) -> Result<T> {
    v.trim()
        .parse::<T>()
        .map_err(|_| Error::Parse(format!("bad value {v:?}")))
}

/// `key=value` pairs separated by commas; lists use `|`, e.g. `n=1|2,q=2|3,count=20,seed=7`.
impl std::str::FromStr for GenConfig {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut cfg = GenConfig::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
            match k.trim() {
                "q" => cfg.q = list(v)?,
                "n" => cfg.n = list(v)?,
                "lambda" => cfg.lambda = list(v)?,
                "side" => {
                    cfg.side =
                        serde_json::from_value(serde_json::Value::String(v.trim().to_uppercase()))
                            .map_err(|_| Error::Parse(format!("unknown side {v:?}")))?
                }
                "vmin" => cfg.vmin = one(v)?,
                "vmax" => cfg.vmax = one(v)?,
                "count" => cfg.count = one(v)?,
                "seed" => cfg.seed = one(v)?,
                "suites" | "suite" => cfg.suites = list(v)?,
                "precision" => cfg.precision = Some(one(v)?),
                "window" => cfg.window = Some(one(v)?),
                "max_n" => cfg.max_n = one(v)?,
                "max_disc" => cfg.max_disc = one(v)?,
                other => return Err(Error::Parse(format!("unknown generator key {other:?}"))),
            }
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Random,
    NonIntegral,
    UnitPart,
    NilpotentPart,
}

fn shape_for(i: usize) -> Shape {
    match i % 8 {
        1 => Shape::NonIntegral,
        3 => Shape::UnitPart,
        5 => Shape::NilpotentPart,
        _ => Shape::Random,
    }
}

#[derive(Debug, Clone, Copy)]
enum Form {
    Diagonal,
    Companion,
    Dense,
}

struct Draw<'a> {
    rng: &'a mut ChaCha8Rng,
    gf: &'static Gf,
}

impl Draw<'_> {
    fn code(&mut self) -> Code {
        self.rng.gen_range(0..self.gf.order() as Code)
    }

    fn nonzero(&mut self) -> Code {
        self.rng.gen_range(1..self.gf.order() as Code)
    }

    /// `t^v (c_0 + c_1 t + c_2 t^2)` with `c_0 ≠ 0`.
    fn element(&mut self, v: i64) -> LocalElement {
        let mut terms = vec![(v, self.nonzero())];
        for k in 1..=2 {
            if self.rng.gen_bool(0.4) {
                terms.push((v + k, self.code()));
            }
        }
        LocalElement::from_terms(self.gf, &terms)
    }

    /// Short integral element, possibly zero.
    fn integral(&mut self) -> LocalElement {
        let mut terms = Vec::new();
        for k in 0..2 {
            if self.rng.gen_bool(0.5) {
                terms.push((k, self.code()));
            }
        }
        LocalElement::from_terms(self.gf, &terms)
    }

    /// Unit triangular `U` and its exact inverse.
    fn unimodular(&mut self, n: usize) -> (Matrix, Matrix) {
        let mut lower = Matrix::identity(self.gf, n);
        let mut upper = Matrix::identity(self.gf, n);
        for i in 0..n {
            for j in 0..i {
                lower.set(i, j, self.integral());
                upper.set(j, i, self.integral());
            }
        }
        let u = lower.mul(&upper);
        let inv = unit_triangular_inverse(&upper).mul(&unit_triangular_inverse(&lower));
        (u, inv)
    }
}

/// `(1 + N)^{-1} = Σ (-N)^k` for nilpotent `N`.
fn unit_triangular_inverse(m: &Matrix) -> Matrix {
    let n = m.rows();
    let id = Matrix::identity(m.field(), n);
    let neg = id.sub(m);
    let mut acc = id.clone();
    let mut pow = id;
    for _ in 1..n {
        pow = pow.mul(&neg);
        acc = acc.add(&pow);
    }
    acc
}

/// Valuations in `[lo, hi]`; the shape decides where the first draw sits relative to `unit`
/// when that is possible inside the range.
fn valuations(
    rng: &mut ChaCha8Rng,
    n: usize,
    shape: Shape,
    lo: i64,
    hi: i64,
    unit: i64,
) -> Vec<i64> {
    let below = (lo < unit).then(|| (lo, (unit - 1).min(hi)));
    let above = (hi > unit).then(|| ((unit + 1).max(lo), hi));
    let at = (lo..=hi).contains(&unit);
    let any = |rng: &mut ChaCha8Rng| rng.gen_range(lo..=hi);
    let from = |rng: &mut ChaCha8Rng, (a, b): (i64, i64)| rng.gen_range(a..=b);
    let mut v: Vec<i64> = match shape {
        Shape::NonIntegral if below.is_some() => {
            let mut v = vec![from(rng, below.unwrap())];
            v.extend((1..n).map(|_| any(rng)));
            v
        }
        Shape::UnitPart if at => {
            let mut v = vec![unit];
            v.extend((1..n).map(|_| match above {
                Some(r) => from(rng, r),
                None => unit,
            }));
            v
        }
        Shape::NilpotentPart if above.is_some() => {
            (0..n).map(|_| from(rng, above.unwrap())).collect()
        }
        _ => (0..n).map(|_| any(rng)).collect(),
    };
    v.shuffle(rng);
    v
}

fn build(d: &mut Draw<'_>, vals: &[i64], form: Form, twisted: bool) -> Result<Matrix> {
    let n = vals.len();
    let eig: Vec<LocalElement> = vals.iter().map(|&v| d.element(v)).collect();
    let diag = Matrix::diagonal(d.gf, &eig);
    Ok(match form {
        Form::Diagonal => diag,
        Form::Companion => MonicPoly::new(Poly::from_roots(d.gf, &eig))?.companion(),
        Form::Dense => {
            let (u, inv) = d.unimodular(n);
            if twisted {
                inv.mul(&diag).mul(&u.sigma()?)
            } else {
                u.mul(&diag).mul(&inv)
            }
        }
    })
}

/// Whether the instance's matrices are regular semi-simple with complete factor data.
#[cfg(test)]
pub(crate) fn admissible(inst: &OrbitInstance) -> bool {
    admissible_within(inst, i64::MAX)
}

fn admissible_within(inst: &OrbitInstance, max_disc: i64) -> bool {
    let ok = |p: Result<InvariantProfile>| {
        p.is_ok_and(|p| {
            let disc = p.delta.poly().discriminant_resultant();
            p.is_regular_semisimple()
                && p.profile.as_ref().is_some_and(|f| f.complete)
                && disc.valuation().is_ok_and(|v| v <= max_disc)
        })
    };
    let lin = match inst.linear_matrix() {
        Ok(Some(x)) => ok(inv_linear(&x)),
        Ok(None) => true,
        Err(_) => false,
    };
    let quat = match inst.quaternion_matrix() {
        Ok(Some(x)) => ok(inv_quaternion(&x, inst.lambda)),
        Ok(None) => true,
        Err(_) => false,
    };
    lin && quat
}

fn draw_instance(rng: &mut ChaCha8Rng, cfg: &GenConfig, shape: Shape) -> Result<OrbitInstance> {
    let q = *cfg.q.choose(rng).expect("nonempty q list");
    let n = *cfg.n.choose(rng).expect("nonempty n list");
    let lambda = *cfg.lambda.choose(rng).expect("nonempty λ list");
    let form = [Form::Diagonal, Form::Companion, Form::Dense][rng.gen_range(0..3)];
    let base = OrbitInstance {
        q,
        n,
        lambda,
        side: cfg.side,
        x_linear: None,
        x_quaternion: None,
        precision: cfg.precision,
        window: cfg.window,
        suites: cfg.suites.clone(),
        seed: Some(cfg.seed),
    };
    match cfg.side {
        Side::Linear => {
            // x/π carries the shape: its unit part sits at v(x) = 1
            let vals = valuations(rng, n, shape, cfg.vmin, cfg.vmax, 1);
            let gf = Gf::get(q, 1)?;
            let x = build(&mut Draw { rng, gf }, &vals, form, false)?;
            Ok(OrbitInstance {
                x_linear: Some(to_payload(&x)),
                ..base
            })
        }
        Side::Quaternion | Side::Both => {
            // the range bounds v(xσ(x)) = 2 v(x)
            let lo = cfg.vmin.div_euclid(2);
            let hi = cfg.vmax.div_euclid(2).max(lo);
            let vals = valuations(rng, n, shape, lo, hi, 0);
            let gf = Gf::get(q, 2)?;
            let x = build(&mut Draw { rng, gf }, &vals, form, true)?;
            let x_linear = match cfg.side {
                Side::Both => Some(to_payload(&inv_quaternion(&x, lambda)?.delta.companion())),
                _ => None,
            };
            Ok(OrbitInstance {
                x_quaternion: Some(to_payload(&x)),
                x_linear,
                ..base
            })
        }
    }
}

/// `count` regular semi-simple instances; the same config always yields the same list.
pub fn gen_instances(cfg: &GenConfig) -> Result<Vec<OrbitInstance>> {
    if let Some(&n) = cfg.n.iter().find(|&&n| n == 0 || n > cfg.max_n) {
        return Err(Error::Unsupported(format!(
            "n = {n} outside 1..={}",
            cfg.max_n
        )));
    }
    if let Some(&q) = cfg.q.iter().find(|q| !SUPPORTED_PRIMES.contains(q)) {
        return Err(Error::UnsupportedField { p: q, k: 1 });
    }
    if cfg.q.is_empty() || cfg.n.is_empty() || cfg.lambda.is_empty() || cfg.vmin > cfg.vmax {
        return Err(Error::Parse("empty generator range".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.count);
    let mut attempts = 0;
    while out.len() < cfg.count {
        attempts += 1;
        if attempts > 200 * cfg.count.max(1) {
            return Err(Error::Unsupported(
                "generator rejected too many draws".into(),
            ));
        }
        let inst = draw_instance(&mut rng, cfg, shape_for(out.len()))?;
        if admissible_within(&inst, cfg.max_disc) {
            out.push(inst);
        }
    }
    Ok(out)
}
