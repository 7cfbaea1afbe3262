//! Command-line front end: evaluate orbital integrals, inspect invariants,
//! generate instances and run verification suites.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use orbint::enumerate::EnumConfig;
use orbint::harness::{
    gen_instances, parse_matrix, parse_matrix_text, verify, GenConfig, RunOptions,
};
use orbint::invariant::{
    epsilon_sign, inv_linear, inv_quaternion, matching_exists, ord_lambda, shift_invariant,
};
use orbint::localfield::parse_polynomial;
use orbint::orbital::{
    orb_conjugation_with, orb_linear_with, orb_par_with, orb_quaternion_with, orb_twisted_with,
    LinearRep, QuaternionRep,
};
use orbint::{
    Error, FieldTag, InvariantProfile, Lambda, Matrix, MonicPoly, OrbitInstance, QsLaurent, Status,
    Suite,
};

#[derive(Parser)]
#[command(
    name = "orbint",
    version,
    about = "Exact orbital integrals over F_q((t))"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one orbital integral.
    Orb(OrbArgs),
    /// Invariant profile, ord, sign and matching existence.
    Inv(InvArgs),
    /// Run verification suites on an instance file or generated instances.
    Verify(VerifyArgs),
    /// Emit generated instances as JSON.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OrbSide {
    /// Linear side, a Laurent polynomial in q^s.
    Linear,
    /// Rescaled linear integral over pairs for x/π.
    Par,
    /// Quaternionic lattice count.
    Quaternion,
    /// Unit-orbit count under conjugation.
    Conjugation,
    /// Unit-orbit count under twisted conjugation.
    Twisted,
}

#[derive(Args)]
struct Common {
    /// Residue field size (a supported prime).
    #[arg(long)]
    q: u32,
    /// Matrix size; inferred from the input when omitted.
    #[arg(long)]
    n: Option<usize>,
    /// Level λ, either 0 or 1/2.
    #[arg(long, default_value = "1/2")]
    lambda: Lambda,
    /// Write the JSON result to this file as well.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct OrbArgs {
    #[command(flatten)]
    common: Common,
    /// Matrix rows separated by ';', entries by ','.
    #[arg(long)]
    x: String,
    #[arg(long, value_enum, default_value = "linear")]
    side: OrbSide,
    #[arg(long)]
    precision: Option<i64>,
    #[arg(long)]
    window: Option<i64>,
}

#[derive(Args)]
struct InvArgs {
    #[command(flatten)]
    common: Common,
    /// Monic polynomial in T with coefficients in F_q((t)).
    #[arg(long, conflicts_with = "x")]
    delta: Option<String>,
    /// Matrix whose invariant is taken.
    #[arg(long)]
    x: Option<String>,
    /// Interpret --x as a quaternionic matrix over F_{q^2}((t)).
    #[arg(long)]
    quaternion: bool,
}

#[derive(Args)]
struct GenSource {
    /// Generator config, e.g. "n=1|2,q=2|3,count=20,seed=7".
    #[arg(long)]
    gen: Option<String>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    lambda: Option<Lambda>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    precision: Option<i64>,
    #[arg(long)]
    window: Option<i64>,
    /// Restrict to these suites (repeatable).
    #[arg(long = "suite")]
    suites: Vec<Suite>,
}

impl GenSource {
    fn config(&self) -> Result<GenConfig, Error> {
        let mut cfg: GenConfig = self.gen.as_deref().unwrap_or("").parse()?;
        if let Some(q) = self.q {
            cfg.q = vec![q];
        }
        if let Some(n) = self.n {
            cfg.n = vec![n];
        }
        if let Some(l) = self.lambda {
            cfg.lambda = vec![l];
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if self.precision.is_some() {
            cfg.precision = self.precision;
        }
        if self.window.is_some() {
            cfg.window = self.window;
        }
        if !self.suites.is_empty() {
            cfg.suites = self.suites.clone();
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file: one JSON instance or an array of them.
    #[arg(long, conflicts_with = "gen")]
    instances: Option<PathBuf>,
    #[command(flatten)]
    source: GenSource,
    /// Write the full JSON reports here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Record per-suite wall-clock time.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    source: GenSource,
    #[arg(long)]
    json: Option<PathBuf>,
}

enum Failure {
    Usage(&'static str, String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Usage(e.kind(), e.to_string())
        } else {
            Failure::Compute(e)
        }
    }
}

fn emit(value: &Value, path: Option<&PathBuf>) -> Result<(), Failure> {
    let text = serde_json::to_string(value).expect("serializable");
    if let Some(p) = path {
        fs::write(p, format!("{text}\n"))
            .map_err(|e| Failure::Usage("USAGE", format!("cannot write {}: {e}", p.display())))?;
    }
    println!("{text}");
    Ok(())
}

fn laurent(p: &QsLaurent) -> Value {
    json!({ "poly": p, "value": p.central_value(), "derivative_log_q": p.central_derivative() })
}

fn read_matrix(src: &str, q: u32, tag: FieldTag, n: Option<usize>) -> Result<Matrix, Failure> {
    let rows = parse_matrix_text(src);
    let n = n.unwrap_or(rows.len());
    Ok(parse_matrix(&rows, q, tag, n)?)
}

fn orb(a: &OrbArgs) -> Result<bool, Failure> {
    let c = &a.common;
    let tag = match a.side {
        OrbSide::Quaternion | OrbSide::Twisted => FieldTag::Quadratic,
        _ => FieldTag::Base,
    };
    let x = read_matrix(&a.x, c.q, tag, c.n)?;
    let mut cfg = EnumConfig::default();
    if let Some(p) = a.precision {
        cfg.precision = p;
    }
    cfg.window = a.window;
    let out = match a.side {
        OrbSide::Linear => laurent(&orb_linear_with(&LinearRep::new(x, c.lambda)?, &cfg)?),
        OrbSide::Par => laurent(&orb_par_with(&LinearRep::new(x, c.lambda)?, &cfg)?),
        OrbSide::Quaternion => {
            json!({ "count": orb_quaternion_with(&QuaternionRep::new(x, c.lambda)?, &cfg)? })
        }
        OrbSide::Conjugation => json!({ "count": orb_conjugation_with(&x, &cfg)? }),
        OrbSide::Twisted => json!({ "count": orb_twisted_with(&x, &cfg)? }),
    };
    emit(&out, c.json.as_ref())?;
    Ok(true)
}

fn inv(a: &InvArgs) -> Result<bool, Failure> {
    let c = &a.common;
    let profile = match (&a.delta, &a.x) {
        (Some(d), None) => {
            let coeffs = parse_polynomial(d, c.q, FieldTag::Base)?;
            let gf = coeffs
                .first()
                .map(|e| e.field())
                .ok_or_else(|| Failure::Usage("PARSE", "empty polynomial".into()))?;
            let delta = MonicPoly::from_coeffs(gf, coeffs)?;
            if c.n.is_some_and(|n| n != delta.degree()) {
                return Err(Failure::Usage(
                    "USAGE",
                    format!("--n does not match deg δ = {}", delta.degree()),
                ));
            }
            InvariantProfile::new(delta)?
        }
        (None, Some(x)) if a.quaternion => {
            inv_quaternion(&read_matrix(x, c.q, FieldTag::Quadratic, c.n)?, c.lambda)?
        }
        (None, Some(x)) => inv_linear(&read_matrix(x, c.q, FieldTag::Base, c.n)?)?,
        _ => {
            return Err(Failure::Usage(
                "USAGE",
                "give exactly one of --delta or --x".into(),
            ))
        }
    };
    let opt = |r: orbint::Result<Value>| r.unwrap_or(Value::Null);
    let out = json!({
        "profile": profile,
        "lambda": c.lambda,
        "ord": opt(ord_lambda(&profile, c.lambda).map(Value::from)),
        "epsilon": opt(epsilon_sign(&profile).map(Value::from)),
        "matching_exists": opt(matching_exists(&profile, c.lambda).map(Value::from)),
        "shift": opt(shift_invariant(&profile).map(|s| json!(s))),
    });
    emit(&out, c.json.as_ref())?;
    Ok(true)
}

fn load_instances(path: &PathBuf) -> Result<Vec<OrbitInstance>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage("USAGE", format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage("USAGE", format!("invalid JSON: {e}")))?;
    let list = match value {
        Value::Array(items) => items,
        one => vec![one],
    };
    list.into_iter()
        .map(|v| {
            serde_json::from_value(v)
                .map_err(|e| Failure::Usage("USAGE", format!("invalid instance: {e}")))
        })
        .collect()
}

fn run_verify(a: &VerifyArgs) -> Result<bool, Failure> {
    let mut instances = match &a.instances {
        Some(path) => load_instances(path)?,
        None => gen_instances(&a.source.config()?)?,
    };
    if a.instances.is_some() && !a.source.suites.is_empty() {
        for inst in &mut instances {
            inst.suites = a.source.suites.clone();
        }
    }
    let reports = verify(&instances, RunOptions { timing: a.timing });
    let (mut pass, mut fail, mut skip) = (0, 0, 0);
    for (i, r) in reports.iter().enumerate() {
        for s in &r.suites {
            match s.status {
                Status::Pass => pass += 1,
                Status::Skip => skip += 1,
                Status::Fail => {
                    fail += 1;
                    eprintln!(
                        "FAIL instance {i} {}: {}",
                        s.suite.name(),
                        s.reason.as_deref().unwrap_or("")
                    );
                }
            }
        }
    }
    eprintln!(
        "{} instances: {pass} PASS, {fail} FAIL, {skip} SKIP",
        reports.len()
    );
    let value = serde_json::to_value(&reports).expect("serializable");
    match &a.json {
        Some(p) => {
            let text = serde_json::to_string_pretty(&value).expect("serializable");
            fs::write(p, format!("{text}\n")).map_err(|e| {
                Failure::Usage("USAGE", format!("cannot write {}: {e}", p.display()))
            })?;
        }
        None => println!("{}", serde_json::to_string(&value).expect("serializable")),
    }
    Ok(fail == 0)
}

fn run_gen(a: &GenArgs) -> Result<bool, Failure> {
    let instances = gen_instances(&a.source.config()?)?;
    emit(
        &serde_json::to_value(&instances).expect("serializable"),
        a.json.as_ref(),
    )?;
    Ok(true)
}

fn error_json(kind: &str, message: &str) {
    println!(
        "{}",
        json!({ "error": { "kind": kind, "message": message } })
    );
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            error_json("USAGE", e.to_string().trim());
            return ExitCode::from(2);
        }
    };
    let result = match &cli.command {
        Command::Orb(a) => orb(a),
        Command::Inv(a) => inv(a),
        Command::Verify(a) => run_verify(a),
        Command::Gen(a) => run_gen(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(kind, msg)) => {
            error_json(kind, &msg);
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            error_json(e.kind(), &e.to_string());
            ExitCode::from(1)
        }
    }
}
