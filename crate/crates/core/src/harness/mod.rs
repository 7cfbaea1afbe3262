//! Verification suites over generated or supplied instances, with JSON reports.
//!
//! Every comparison is evaluated twice: at the instance precision and ten
//! digits higher. A failing comparison is retried with a wider window before
//! it is reported.

mod gen;
mod instance;
mod suites;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

pub use gen::{gen_instances, GenConfig};
pub use instance::{
    parse_matrix, parse_matrix_text, to_payload, MatrixPayload, OrbitInstance, Side, Suite,
};

use crate::enumerate::{Certificate, EnumConfig};
use crate::error::Result;
use crate::invariant::{
    epsilon_sign, inv_linear, inv_quaternion, matching_exists, ord_lambda, InvariantProfile,
};
use crate::orbital::{Lambda, TransferCheck};
use suites::{evaluate, Comparison, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "SKIP")]
    Skip,
}

/// Agreement of the comparison at precision `N` and `N + 10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrecisionCheck {
    pub precision: i64,
    pub rerun_precision: i64,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub values: BTreeMap<String, Value>,
    pub certificates: Vec<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transfer: Option<TransferCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<PrecisionCheck>,
    pub retried: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// Invariant data of the instance sides.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantSummary {
    pub profile: InvariantProfile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ord: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matching_exists: Option<bool>,
}

impl InvariantSummary {
    pub fn new(profile: InvariantProfile, lambda: Lambda) -> Self {
        let ord = ord_lambda(&profile, lambda).ok();
        let epsilon = epsilon_sign(&profile).ok();
        let matching_exists = matching_exists(&profile, lambda).ok();
        InvariantSummary {
            profile,
            ord,
            epsilon,
            matching_exists,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub instance: OrbitInstance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linear_invariant: Option<InvariantSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quaternion_invariant: Option<InvariantSummary>,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.status != Status::Fail)
    }

    pub fn suite(&self, suite: Suite) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.suite == suite)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Record wall-clock time; reports are then no longer byte-reproducible.
    pub timing: bool,
}

fn same_result(a: &Comparison, b: &Comparison) -> bool {
    a.pass == b.pass && a.values == b.values
}

fn widened(cfg: &EnumConfig, c: &Comparison) -> EnumConfig {
    let used = c
        .certificates
        .iter()
        .map(|c| c.window)
        .max()
        .or(cfg.window)
        .unwrap_or(0);
    EnumConfig {
        precision: cfg.precision + 10,
        window: Some(used + 1),
        ..*cfg
    }
}

/// Runs one suite on one instance.
pub fn run_suite(inst: &OrbitInstance, suite: Suite) -> SuiteReport {
    run_suite_with(inst, suite, RunOptions::default())
}

pub fn run_suite_with(inst: &OrbitInstance, suite: Suite, opts: RunOptions) -> SuiteReport {
    let start = Instant::now();
    let cfg = inst.config();
    let mut report = SuiteReport {
        suite,
        status: Status::Skip,
        reason: None,
        values: BTreeMap::new(),
        certificates: Vec::new(),
        transfer: None,
        precision: None,
        retried: false,
        elapsed_ms: None,
    };
    if let Err(e) = inst.validate() {
        report.status = Status::Fail;
        report.reason = Some(format!("invalid instance: {e}"));
        return report;
    }
    match evaluate(inst, suite, &cfg) {
        Outcome::Skip(reason) => report.reason = Some(reason),
        Outcome::Compared(mut first) => {
            let hi = EnumConfig {
                precision: cfg.precision + 10,
                ..cfg
            };
            let agree = match evaluate(inst, suite, &hi) {
                Outcome::Compared(second) => same_result(&first, &second),
                Outcome::Skip(_) => false,
            };
            if !first.pass {
                if let Outcome::Compared(retry) = evaluate(inst, suite, &widened(&cfg, &first)) {
                    report.retried = true;
                    if retry.pass {
                        first = retry;
                    }
                }
            }
            let transfer_ok = first.transfer.is_none_or(|t| t.all_agree());
            let pass = first.pass && agree && transfer_ok;
            report.status = if pass { Status::Pass } else { Status::Fail };
            report.reason = match (first.reason, agree, transfer_ok) {
                (Some(r), _, _) if !first.pass => Some(r),
                (_, false, _) => Some("result changes between precision N and N + 10".into()),
                (_, _, false) => Some("block and index transfer factors disagree".into()),
                _ => None,
            };
            report.values = first.values;
            report.certificates = first.certificates;
            report.transfer = first.transfer;
            report.precision = Some(PrecisionCheck {
                precision: cfg.precision,
                rerun_precision: hi.precision,
                agree,
            });
        }
    }
    if opts.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    report
}

/// Suites requested by the instance, or all of them when none are listed.
fn requested(inst: &OrbitInstance) -> Vec<Suite> {
    if inst.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        inst.suites.clone()
    }
}

pub fn run_instance(inst: &OrbitInstance, opts: RunOptions) -> Report {
    let summary =
        |p: Result<InvariantProfile>| p.ok().map(|p| InvariantSummary::new(p, inst.lambda));
    let linear_invariant = inst
        .linear_matrix()
        .ok()
        .flatten()
        .and_then(|x| summary(inv_linear(&x)));
    let quaternion_invariant = inst
        .quaternion_matrix()
        .ok()
        .flatten()
        .and_then(|x| summary(inv_quaternion(&x, inst.lambda)));
    let suites = requested(inst)
        .into_iter()
        .map(|s| run_suite_with(inst, s, opts))
        .collect();
    Report {
        instance: inst.clone(),
        linear_invariant,
        quaternion_invariant,
        suites,
    }
}

/// Runs every instance in a work pool; reports come back in instance order.
pub fn verify(instances: &[OrbitInstance], opts: RunOptions) -> Vec<Report> {
    instances
        .par_iter()
        .map(|inst| run_instance(inst, opts))
        .collect()
}
