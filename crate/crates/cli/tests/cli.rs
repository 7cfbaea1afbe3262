use std::fs;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn orbint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbint"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn orb_rank_one_t_squared() {
    let out = orbint(&[
        "orb", "--q", "3", "--n", "1", "--lambda", "1/2", "--x", "t^2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_json(&out),
        json!({"poly": {"1": 1, "-1": -1}, "value": 0, "derivative_log_q": 2})
    );
}

#[test]
fn orb_other_sides() {
    let out = orbint(&[
        "orb", "--q", "3", "--lambda", "1/2", "--x", "t", "--side", "par",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["value"], json!(1));
    let out = orbint(&[
        "orb",
        "--q",
        "2",
        "--lambda",
        "0",
        "--x",
        "t",
        "--side",
        "quaternion",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_json(&out)["count"].is_u64());
}

#[test]
fn inv_rank_one() {
    let out = orbint(&[
        "inv", "--q", "3", "--n", "1", "--delta", "T - t^2", "--lambda", "1/2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["ord"], json!(1));
    assert_eq!(v["epsilon"], json!(-1));
    assert_eq!(v["matching_exists"], json!(false));
}

#[test]
fn inv_from_matrix_agrees_with_delta() {
    let a = stdout_json(&orbint(&["inv", "--q", "5", "--x", "0, t^3; 1, t"]));
    let b = stdout_json(&orbint(&["inv", "--q", "5", "--delta", "T^2 - t*T - t^3"]));
    assert_eq!(a, b);
}

#[test]
fn verify_reduction_on_generated_instances() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reports.json");
    let out = orbint(&[
        "verify",
        "--suite",
        "REDUCTION",
        "--gen",
        "n=1,count=20,seed=7",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let reports: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 20);
    assert!(reports
        .iter()
        .all(|r| r["suites"].as_array().unwrap().len() == 1));
}

#[test]
fn verify_reports_are_byte_identical() {
    let args = ["verify", "--gen", "n=1|2,q=2|3,count=6,seed=3"];
    let a = orbint(&args);
    let b = orbint(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn gen_then_verify_instance_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("instances.json");
    let out = orbint(&[
        "gen",
        "--gen",
        "n=1,count=4,seed=2",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = orbint(&[
        "verify",
        "--instances",
        path.to_str().unwrap(),
        "--suite",
        "FUNC_EQ",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out).as_array().unwrap().len(), 4);
}

#[test]
fn failing_suite_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // a 1×1 payload declared as n = 2
    fs::write(
        &path,
        r#"{"q":3,"n":2,"lambda":"1/2","side":"LINEAR","x_linear":[["t"]],"suites":["PAR"]}"#,
    )
    .unwrap();
    let out = orbint(&["verify", "--instances", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn errors_are_json_with_exit_codes() {
    let out = orbint(&["orb", "--q", "4", "--x", "t"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(
        stdout_json(&out)["error"]["kind"],
        json!("UNSUPPORTED_FIELD")
    );

    let out = orbint(&["orb", "--q", "3", "--x", "t^("]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["kind"], json!("PARSE"));

    let out = orbint(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["kind"], json!("USAGE"));

    let out = orbint(&["orb", "--q", "3", "--lambda", "0", "--x", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["error"]["kind"], json!("NOT_REGULAR"));
}
