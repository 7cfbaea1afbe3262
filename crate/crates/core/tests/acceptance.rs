//! Acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbint::enumerate::unit_orbit_check;
use orbint::harness::{
    gen_instances, parse_matrix, parse_matrix_text, verify, GenConfig, RunOptions,
};
use orbint::invariant::{ord_lambda, shift_invariant};
use orbint::lattice::{canonicalize, LatticeBasis, LatticePair};
use orbint::localfield::{parse_element, parse_polynomial, Gf};
use orbint::orbital::{orb_conjugation, orb_linear, transfer_factor, LinearRep};
use orbint::{
    FieldTag, InvariantProfile, Lambda, LocalElement, Matrix, MonicPoly, OrbitInstance, QsLaurent,
    Report, Status, Suite,
};

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            pass,
            detail: detail.into(),
        }
    }
}

/// Reports from every suite run, kept for the cross-cutting criteria.
#[derive(Default)]
struct Pool {
    reports: Vec<Report>,
    /// Generated batch shared by the functional-equation and vanishing criteria.
    general: Vec<Report>,
}

impl Pool {
    fn run(&mut self, instances: &[OrbitInstance]) -> Vec<Report> {
        let reports = verify(instances, RunOptions::default());
        self.reports.extend(reports.iter().cloned());
        reports
    }

    fn run_gen(&mut self, config: &str) -> Vec<Report> {
        let cfg: GenConfig = config.parse().expect("generator config");
        let instances = gen_instances(&cfg).expect("instances");
        self.run(&instances)
    }
}

#[derive(Default, Debug)]
struct Tally {
    pass: usize,
    fail: usize,
    skip: usize,
    failures: Vec<String>,
}

impl Tally {
    fn of(reports: &[Report], suite: Suite) -> Tally {
        let mut t = Tally::default();
        for r in reports {
            if let Some(s) = r.suite(suite) {
                match s.status {
                    Status::Pass => t.pass += 1,
                    Status::Skip => t.skip += 1,
                    Status::Fail => {
                        t.fail += 1;
                        t.failures.push(format!(
                            "{}: {}",
                            serde_json::to_string(&r.instance).unwrap(),
                            s.reason.as_deref().unwrap_or("")
                        ));
                    }
                }
            }
        }
        t
    }

    fn add(&mut self, other: Tally) {
        self.pass += other.pass;
        self.fail += other.fail;
        self.skip += other.skip;
        self.failures.extend(other.failures);
    }

    fn summary(&self) -> String {
        let mut s = format!("{} pass, {} fail, {} skip", self.pass, self.fail, self.skip);
        if let Some(f) = self.failures.first() {
            s.push_str(&format!("; first failure {f}"));
        }
        s
    }
}

fn gf(q: u32, tag: FieldTag) -> &'static Gf {
    Gf::get(q, if tag == FieldTag::Base { 1 } else { 2 }).unwrap()
}

fn elem(src: &str, q: u32, tag: FieldTag) -> LocalElement {
    parse_element(src, q, tag).unwrap()
}

fn matrix(src: &str, q: u32, tag: FieldTag) -> Matrix {
    let rows = parse_matrix_text(src);
    let n = rows.len();
    parse_matrix(&rows, q, tag, n).unwrap()
}

fn rank_one_closed_form(q: u32, v: i64) -> QsLaurent {
    QsLaurent::from_coeffs(
        q as u64,
        (0..=v).map(|a| (v - 2 * a, if a % 2 == 0 { 1 } else { -1 })),
    )
}

fn line(x: &LocalElement) -> LatticeBasis {
    canonicalize(&[vec![x.clone()]]).unwrap()
}

/// Rank-1 linear integral by brute force over the window `[-m, m]`: every
/// pair `(t^a O, t^b O)` with `x Λ_- ⊆ Λ_+ ⊆ Λ_-`, grouped into `F^×`-orbits by
/// `a - b`, each orbit weighted by the transfer factor of every member.
/// `x` must be topologically nilpotent.
fn rank_one_brute_force(x: &LocalElement, m: i64) -> Option<QsLaurent> {
    let g = x.field();
    let rep = LinearRep::new(Matrix::scalar(g, 1, x), Lambda::Zero).ok()?;
    let mut orbits: BTreeMap<i64, QsLaurent> = BTreeMap::new();
    for a in -m..=m {
        for b in -m..=m {
            let plus = line(&LocalElement::t_pow(g, a));
            let minus = line(&LocalElement::t_pow(g, b));
            let image = line(&(x * &LocalElement::t_pow(g, b)));
            if !(plus.contains(&image) && minus.contains(&plus)) {
                continue;
            }
            let pair = LatticePair::new(plus, minus).ok()?;
            let omega = transfer_factor(&rep, &pair).ok()?;
            match orbits.get(&(a - b)) {
                Some(prev) if *prev != omega => return None,
                Some(_) => {}
                None => {
                    orbits.insert(a - b, omega);
                }
            }
        }
    }
    let mut sum = QsLaurent::zero(g.order() as u64);
    for omega in orbits.values() {
        sum = &sum + omega;
    }
    Some(sum)
}

fn criterion_1(_: &mut Pool) -> Verdict {
    let mut cases = 0;
    let mut bad = Vec::new();
    for q in [2u32, 3, 5] {
        let units = ["1 + t", "1 + t^2", "1 + t + t^3"];
        let mut units: Vec<String> = units.iter().map(|s| s.to_string()).collect();
        if q > 2 {
            units.push("2*(1 + t)".into());
        }
        for v in 0..=5i64 {
            for u in &units {
                cases += 1;
                let expected = rank_one_closed_form(q, v);
                let x = elem(&format!("({u})*t^{v}"), q, FieldTag::Base);
                let g = gf(q, FieldTag::Base);
                let computed = if v >= 1 {
                    orb_linear(&LinearRep::new(Matrix::scalar(g, 1, &x), Lambda::Zero).unwrap())
                } else {
                    let px = &x * &LocalElement::t_pow(g, 1);
                    orb_linear(&LinearRep::new(Matrix::scalar(g, 1, &px), Lambda::Half).unwrap())
                };
                // pairs describe the λ = 0 integral only for nilpotent x; a unit
                // is checked against its conjugation count instead
                let (oracle, wider) = if v >= 1 {
                    (
                        rank_one_brute_force(&x, v + 3),
                        rank_one_brute_force(&x, v + 4),
                    )
                } else {
                    let c = orb_conjugation(&Matrix::scalar(g, 1, &x))
                        .ok()
                        .map(|c| QsLaurent::constant(q as u64, c as i64));
                    (c.clone(), c)
                };
                let ok = computed.as_ref().ok() == Some(&expected)
                    && oracle.as_ref() == Some(&expected)
                    && wider.as_ref() == Some(&expected);
                if !ok {
                    bad.push(format!(
                        "q={q} v={v} u={u}: got {computed:?}, oracle {oracle:?}"
                    ));
                }
            }
        }
    }
    Verdict::new(
        bad.is_empty(),
        format!(
            "{cases} cases against closed form and window oracle, {} mismatches{}",
            bad.len(),
            bad.first().map(|b| format!(" ({b})")).unwrap_or_default()
        ),
    )
}

fn per_n_criterion(
    pool: &mut Pool,
    suite: Suite,
    configs: &[(usize, &str)],
    min: usize,
) -> Verdict {
    let mut parts = Vec::new();
    let mut pass = true;
    for (n, config) in configs {
        let reports = pool.run_gen(config);
        let t = Tally::of(&reports, suite);
        pass &= t.fail == 0 && t.pass >= min;
        parts.push(format!("n={n}: {}", t.summary()));
    }
    Verdict::new(pass, parts.join("; "))
}

fn criterion_2(pool: &mut Pool) -> Verdict {
    per_n_criterion(
        pool,
        Suite::Reduction,
        &[
            (
                1,
                "n=1,q=2|3|5,vmin=2,vmax=6,count=60,seed=21,suites=REDUCTION",
            ),
            (
                2,
                "n=2,q=2|3,vmin=2,vmax=4,count=60,seed=22,suites=REDUCTION",
            ),
        ],
        50,
    )
}

fn criterion_3(pool: &mut Pool) -> Verdict {
    per_n_criterion(
        pool,
        Suite::Reduction,
        &[
            (
                1,
                "n=1,q=2|3|5,side=quaternion,vmin=2,vmax=7,count=60,seed=31,suites=REDUCTION",
            ),
            (
                2,
                "n=2,q=2|3,side=quaternion,vmin=2,vmax=5,count=60,seed=32,suites=REDUCTION",
            ),
        ],
        50,
    )
}

/// Rank-1 fundamental lemma over `v(δ(0)) ∈ [0, 6]` and unit classes. Matching
/// cases start from a quaternionic `y`; non-matching ones from a linear `x` of
/// the wrong valuation parity.
fn criterion_4(pool: &mut Pool) -> Verdict {
    let mut instances = Vec::new();
    for q in [2u32, 3, 5] {
        let mut residues = Vec::new();
        for a in 0..q {
            for b in 0..q {
                if a != 0 || b != 0 {
                    residues.push(format!("({a} + {b}*w)"));
                }
            }
        }
        let tails = ["1", "(1 + t)", "(1 + w*t)"];
        for lambda in [Lambda::Half, Lambda::Zero] {
            let eps = if lambda == Lambda::Half { 1 } else { 0 };
            for vd in 0..=6i64 {
                if (vd - eps).rem_euclid(2) == 0 {
                    let k = (vd - eps) / 2;
                    for r in &residues {
                        for tail in tails {
                            let y = matrix(&format!("{r}*{tail}*t^{k}"), q, FieldTag::Quadratic);
                            instances.push(
                                OrbitInstance::quaternion(q, lambda, &y).with_suites(&[Suite::Fl]),
                            );
                        }
                    }
                } else {
                    for c in 1..q {
                        for tail in ["1", "(1 + t)"] {
                            let x = matrix(&format!("{c}*{tail}*t^{vd}"), q, FieldTag::Base);
                            instances.push(
                                OrbitInstance::linear(q, lambda, &x).with_suites(&[Suite::Fl]),
                            );
                        }
                    }
                }
            }
        }
    }
    let reports = pool.run(&instances);
    let t = Tally::of(&reports, Suite::Fl);
    let (mut matched, mut unmatched) = (0, 0);
    for r in &reports {
        let s = r.suite(Suite::Fl).unwrap();
        if s.status == Status::Pass {
            if s.values.contains_key("quaternion") {
                matched += 1;
            } else {
                unmatched += 1;
            }
        }
    }
    // expected skips: points that are not regular semi-simple, and λ = 0 units
    // where neither integral is defined
    let expected_skips = reports
        .iter()
        .filter(|r| r.suite(Suite::Fl).unwrap().status == Status::Skip)
        .filter(|r| {
            let regular = r
                .linear_invariant
                .as_ref()
                .or(r.quaternion_invariant.as_ref())
                .is_some_and(|i| i.profile.is_regular_semisimple());
            let x = r
                .instance
                .quaternion_matrix()
                .unwrap()
                .or(r.instance.linear_matrix().unwrap())
                .unwrap();
            !regular || (r.instance.lambda == Lambda::Zero && x.get(0, 0).valuation().unwrap() == 0)
        })
        .count();
    Verdict::new(
        t.fail == 0 && t.skip == expected_skips && matched > 0 && unmatched > 0,
        format!("{}; {matched} matching, {unmatched} non-matching; {expected_skips} skips are non-regular points or λ=0 units", t.summary()),
    )
}

const GENERAL: &[&str] = &[
    "n=1,q=2|3|5|7,count=80,seed=51",
    "n=1,q=2|3,side=both,count=40,seed=52",
    "n=2,q=2|3,count=80,seed=53",
    "n=2,q=2|3,side=both,count=30,seed=54",
    "n=2,q=5,count=20,seed=55",
    "n=3,q=2|3,count=30,seed=56",
];

fn general_batch(pool: &mut Pool) -> Vec<Report> {
    let mut all = Vec::new();
    for config in GENERAL {
        all.extend(pool.run_gen(&format!("{config},suites=FUNC_EQ|VANISH|PAR|FL")));
    }
    all
}

fn criterion_5(pool: &mut Pool) -> Verdict {
    pool.general = general_batch(pool);
    let general = &pool.general;
    let t = Tally::of(general, Suite::FuncEq);
    Verdict::new(
        t.fail == 0 && t.pass >= 200,
        format!("{} over {} generated instances", t.summary(), general.len()),
    )
}

fn criterion_6(pool: &mut Pool) -> Verdict {
    let general = &pool.general;
    let t = Tally::of(general, Suite::Vanish);
    let strict = general
        .iter()
        .filter_map(|r| r.suite(Suite::Vanish))
        .filter(|s| {
            s.status == Status::Pass && s.values.get("vanishing_order") != s.values.get("ord")
        })
        .count();
    Verdict::new(
        t.fail == 0 && t.pass >= 200,
        format!(
            "{}; {strict} instances vanish beyond the bound",
            t.summary()
        ),
    )
}

fn criterion_7(pool: &mut Pool) -> Verdict {
    let mut linear = Tally::of(
        &pool.run_gen("n=2|3,q=2|3,vmin=1,vmax=3,count=80,seed=71,suites=FACTOR"),
        Suite::Factor,
    );
    // explicit block-diagonal instances: nilpotent block next to a unit block of x/π
    let mut explicit = Vec::new();
    for q in [2u32, 3] {
        for (a, b) in [
            ("t^2", "t + t^2"),
            ("t^3", "t*(1 + t)"),
            ("0, t^4; 1, 0", "t + t^3"),
            ("t^2", "0, t^2; 1, t"),
        ] {
            let src = block_diag(a, b);
            explicit.push(
                OrbitInstance::linear(q, Lambda::Half, &matrix(&src, q, FieldTag::Base))
                    .with_suites(&[Suite::Factor]),
            );
        }
    }
    linear.add(Tally::of(&pool.run(&explicit), Suite::Factor));
    let quaternion = Tally::of(
        &pool.run_gen("n=2|3,q=2|3,side=quaternion,vmin=0,vmax=3,count=80,seed=72,suites=FACTOR"),
        Suite::Factor,
    );
    Verdict::new(
        linear.fail == 0 && quaternion.fail == 0 && linear.pass >= 20 && quaternion.pass >= 10,
        format!(
            "linear {}; quaternion {}",
            linear.summary(),
            quaternion.summary()
        ),
    )
}

/// Block-diagonal matrix text from two square blocks in the same text format.
fn block_diag(a: &str, b: &str) -> String {
    let ra = parse_matrix_text(a);
    let rb = parse_matrix_text(b);
    let (na, nb) = (ra.len(), rb.len());
    let mut rows = Vec::new();
    for r in &ra {
        let mut row = r.clone();
        row.extend(std::iter::repeat_n("0".to_string(), nb));
        rows.push(row.join(", "));
    }
    for r in &rb {
        let mut row: Vec<String> = std::iter::repeat_n("0".to_string(), na).collect();
        row.extend(r.iter().cloned());
        rows.push(row.join(", "));
    }
    rows.join("; ")
}

fn criterion_8(pool: &mut Pool) -> Verdict {
    let linear = Tally::of(
        &pool.run_gen("n=1|2|3,q=2|3,vmin=1,vmax=1,count=40,seed=81,suites=EDGE"),
        Suite::Edge,
    );
    let quaternion = Tally::of(
        &pool.run_gen("n=1|2,q=2|3,side=quaternion,vmin=0,vmax=1,count=40,seed=82,suites=EDGE"),
        Suite::Edge,
    );
    Verdict::new(
        linear.fail == 0 && quaternion.fail == 0 && linear.pass >= 20 && quaternion.pass >= 20,
        format!(
            "unit-part linear {}; unit quaternion {}",
            linear.summary(),
            quaternion.summary()
        ),
    )
}

fn criterion_9(pool: &mut Pool) -> Verdict {
    let (mut pairs, mut agreeing) = (0usize, 0usize);
    let mut orientations = std::collections::BTreeSet::new();
    for r in &pool.reports {
        for s in &r.suites {
            if let Some(t) = &s.transfer {
                pairs += t.pairs;
                agreeing += t.agreeing;
                orientations.insert(
                    serde_json::to_value(t.orientation)
                        .unwrap()
                        .as_str()
                        .unwrap_or_default()
                        .to_string(),
                );
            }
        }
    }
    Verdict::new(
        pairs > 0 && pairs == agreeing && orientations.len() == 1,
        format!(
            "{agreeing}/{pairs} pairs agree; orientation {}",
            orientations.into_iter().collect::<Vec<_>>().join(", ")
        ),
    )
}

fn random_element(rng: &mut ChaCha8Rng, q: u32, lo: i64, hi: i64) -> String {
    let terms: Vec<String> = (0..rng.gen_range(1..=3))
        .map(|_| format!("{}*t^{}", rng.gen_range(1..q), rng.gen_range(lo..=hi)))
        .collect();
    terms.join(" + ")
}

fn criterion_10(_: &mut Pool) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut checked, mut drawn, mut bad) = (0, 0, Vec::new());
    while checked < 150 && drawn < 5000 {
        drawn += 1;
        let q = [2u32, 3, 5][rng.gen_range(0..3)];
        let n = rng.gen_range(1..=4usize);
        let mut src = format!("T^{n}");
        for i in 0..n {
            if rng.gen_bool(0.8) {
                src.push_str(&format!(
                    " + ({})*T^{i}",
                    random_element(&mut rng, q, (n - i) as i64, 2 * n as i64 + 2)
                ));
            }
        }
        let g = gf(q, FieldTag::Base);
        let Ok(delta) =
            MonicPoly::from_coeffs(g, parse_polynomial(&src, q, FieldTag::Base).unwrap())
        else {
            continue;
        };
        let Ok(p) = InvariantProfile::new(delta) else {
            continue;
        };
        if !p.is_regular_semisimple() || p.profile.is_none() {
            continue;
        }
        let Ok(shifted) = shift_invariant(&p) else {
            continue;
        };
        if !shifted.profile.is_regular_semisimple() {
            continue;
        }
        checked += 1;
        let lhs = ord_lambda(&p, Lambda::Half);
        let rhs = ord_lambda(&shifted.profile, Lambda::Zero);
        if lhs.is_err() || lhs != rhs {
            bad.push(format!("{src}: {lhs:?} vs {rhs:?}"));
        }
    }
    Verdict::new(
        checked >= 100 && bad.is_empty(),
        format!(
            "{checked} separable δ with n ≤ 4 from {drawn} draws, {} mismatches{}",
            bad.len(),
            bad.first().map(|b| format!(" ({b})")).unwrap_or_default()
        ),
    )
}

fn criterion_11(pool: &mut Pool) -> Verdict {
    let mut unit_checks = 0;
    let mut unit_bad = Vec::new();
    for q in [2u32, 3] {
        for src in [
            "t",
            "t^2",
            "t + t^2",
            "t^3",
            "t, 0; 0, t^2",
            "t^2, 0; 0, t",
            "t, 0; 0, t + t^2",
            "t, 0; 0, t^3",
            "t^2, 0; 0, t^3",
            "t, 0; 0, 1 + t",
            "t + t^3, 0; 0, t^2 + t^3",
        ] {
            let x = matrix(src, q, FieldTag::Base);
            match (unit_orbit_check(&x), orb_conjugation(&x)) {
                (Ok(rep), Ok(count)) => {
                    unit_checks += 1;
                    let weighted: u64 = rep.orbits.iter().map(|o| o.index).sum();
                    if !rep.consistent() || rep.representatives as u64 != count || weighted != count
                    {
                        unit_bad.push(format!(
                            "q={q} x={src}: weighted {weighted} vs count {count}"
                        ));
                    }
                }
                (a, b) => unit_bad.push(format!("q={q} x={src}: {:?} / {:?}", a.err(), b.err())),
            }
        }
    }
    let (mut compared, mut certified, mut robust) = (0, 0, 0);
    let mut uncertified = Vec::new();
    for r in &pool.reports {
        for s in &r.suites {
            if s.status == Status::Skip {
                continue;
            }
            compared += 1;
            if s.precision.is_some_and(|p| p.agree) {
                robust += 1;
            }
            if !s.certificates.is_empty() && s.certificates.iter().all(|c| c.count == c.count_next)
            {
                certified += 1;
            } else {
                uncertified.push(format!(
                    "{} {}",
                    s.suite.name(),
                    serde_json::to_string(&r.instance).unwrap()
                ));
            }
        }
    }
    Verdict::new(
        unit_checks >= 20 && unit_bad.is_empty() && certified == compared && robust == compared,
        format!(
            "{unit_checks} unit-orbit checks, {} inconsistent{}; {certified}/{compared} reports window-certified{}; {robust}/{compared} agree at N and N+10",
            unit_bad.len(),
            unit_bad.first().map(|b| format!(" ({b})")).unwrap_or_default(),
            uncertified.first().map(|b| format!(" (missing: {b})")).unwrap_or_default()
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut pool = Pool::default();
    let mut results: Vec<(u32, &str, Verdict, f64)> = Vec::new();
    let mut record =
        |id: u32, name: &'static str, f: &mut dyn FnMut(&mut Pool) -> Verdict, pool: &mut Pool| {
            let t = Instant::now();
            let v = f(pool);
            let secs = t.elapsed().as_secs_f64();
            println!(
                "criterion {id:>2} {}: {name}: {} ({secs:.1}s)",
                if v.pass { "PASS" } else { "FAIL" },
                v.detail
            );
            results.push((id, name, v, secs));
        };
    record(1, "rank-1 closed form", &mut criterion_1, &mut pool);
    record(2, "linear reduction", &mut criterion_2, &mut pool);
    record(3, "quaternionic reduction", &mut criterion_3, &mut pool);
    record(4, "fundamental lemma at n=1", &mut criterion_4, &mut pool);
    record(5, "functional equation", &mut criterion_5, &mut pool);
    record(6, "vanishing bound", &mut criterion_6, &mut pool);
    record(7, "factorization", &mut criterion_7, &mut pool);
    record(8, "edge identities", &mut criterion_8, &mut pool);
    record(
        9,
        "transfer factor cross-check",
        &mut criterion_9,
        &mut pool,
    );
    record(10, "ord under the shift", &mut criterion_10, &mut pool);
    record(11, "infrastructure", &mut criterion_11, &mut pool);
    let failed = results.iter().filter(|r| !r.2.pass).count();
    println!(
        "acceptance: {} of {} criteria pass ({:.1}s)",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
