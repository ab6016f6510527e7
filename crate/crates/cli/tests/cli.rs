use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_ensemble-vol");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ensemble-vol-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

const ORTHONORMAL: &str = r#"{"dimension": 2, "states": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]], "probs": [0.5, 0.5]}"#;
const IDENTICAL: &str = r#"{"dimension": 2, "states": [[[1, 0], [0, 0]], [[1, 0], [0, 0]]], "probs": [0.5, 0.5]}"#;

#[test]
fn orthonormal_pair() {
    let f = scratch("orth.json", ORTHONORMAL);
    let out = run(&["analyze", f.to_str().unwrap(), "--bits"]);
    assert!(out.status.success());
    let doc = json(&out);
    let s = doc["entropy"]["nats"].as_f64().unwrap();
    assert!((s - 2f64.ln()).abs() < 1e-11);
    assert_eq!(doc["entropy"]["bits"].as_f64(), Some(1.0));
    assert_eq!(doc["alpha"]["1,2"].as_f64(), Some(1.0));
    assert_eq!(doc["symmetric_polys"]["max_discrepancy"].as_f64(), Some(0.0));
}

#[test]
fn identical_pair() {
    let f = scratch("same.json", IDENTICAL);
    let out = run(&["analyze", f.to_str().unwrap()]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["entropy"]["nats"].as_f64(), Some(0.0));
    assert_eq!(doc["alpha"]["1,2"].as_f64(), Some(0.0));
    assert_eq!(doc["ensemble"]["span"].as_u64(), Some(1));
    assert!(doc["entropy"].get("bits").is_none());
}

#[test]
fn analyze_rejects_bad_input() {
    let unknown = scratch("unknown.json", r#"{"dimension": 1, "states": [[[1, 0]]], "probs": [1], "extra": 0}"#);
    let short = scratch("short.json", r#"{"dimension": 2, "states": [[[1, 0]]], "probs": [1]}"#);
    let unnormalized = scratch("norm.json", r#"{"dimension": 1, "states": [[[2, 0]]], "probs": [1]}"#);
    let garbage = scratch("garbage.json", "not json");
    for f in [&unknown, &short, &unnormalized, &garbage] {
        let out = run(&["analyze", f.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{}", f.display());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(run(&["analyze", "/nonexistent/ensemble.json"]).status.code(), Some(2));
    let out = run(&["analyze", unnormalized.to_str().unwrap(), "--renormalize"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["entropy"]["nats"].as_f64(), Some(0.0));
}

#[test]
fn usage_errors() {
    for args in [
        &["search", "nothing"][..],
        &["table", "1"],
        &["verify", "theorem1", "--trials", "0"],
        &["verify", "bounds", "--tolerance", "-1"],
        &["search", "nonmonotone", "--budget", "0"],
        &["search", "nonmonotone", "--p-small", "0.5"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(64), "{args:?}");
    }
}

#[test]
fn small_table() {
    let out = run(&["table", "2"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "2 2 1 1\n");
}

#[test]
fn grid_layout() {
    let out = run(&["table", "3", "--grid"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with('k') && lines[0].contains("n=2") && lines[0].contains("n=3"));
    assert!(lines[1].starts_with('2') && lines[1].contains("1 (1)"));
    assert!(lines[2].contains("3 (3)") && lines[2].contains("4 (4)"));
}

#[test]
fn check_paper_beyond_reference() {
    let out = run(&["table", "7", "--check-paper"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 21);
}

#[test]
fn identical_runs_identical_bytes() {
    for args in [
        &["verify", "subentropy", "--trials", "50", "--seed", "3"][..],
        &["search", "nonmonotone", "--seed", "4"],
        &["search", "js-counterexample", "--seed", "5"],
    ] {
        let (a, b) = (run(args), run(args));
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let args = ["verify", "identities", "--trials", "40", "--seed", "9"];
    let one = Command::new(BIN).args(args).env("ENSEMBLE_VOL_THREADS", "1").output().unwrap();
    let many = Command::new(BIN).args(args).env("ENSEMBLE_VOL_THREADS", "4").output().unwrap();
    assert_eq!(one.stdout, many.stdout);
    let bad = Command::new(BIN).args(args).env("ENSEMBLE_VOL_THREADS", "lots").output().unwrap();
    assert_eq!(bad.status.code(), Some(64));
}

#[test]
fn exhausted_search() {
    let out = run(&["search", "js-counterexample", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let doc = json(&out);
    assert_eq!(doc["found"], Value::Bool(false));
    assert_eq!(doc["budget"].as_u64(), Some(1));
}

#[test]
fn tolerance_override_can_fail_a_suite() {
    let out = run(&["verify", "identities", "--trials", "20", "--tolerance", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], Value::Bool(false));
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("ensemble-vol-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.txt");
    let out = run(&["table", "3", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 3);
    let out = run(&["table", "3", "--output", "/nonexistent/dir/table.txt"]);
    assert_eq!(out.status.code(), Some(74));
}

#[test]
fn witness_reports_both_routes() {
    let out = run(&["search", "nonmonotone", "--seed", "11"]);
    assert!(out.status.success());
    let doc = json(&out);
    let d = &doc["derivatives"];
    assert!(d["dS_dx_chain_rule"].as_f64().unwrap() < -1e-6);
    assert!(d["dS_dx_finite_difference"].as_f64().unwrap() < -1e-6);
    assert!(d["ds2_dx"].as_f64().unwrap().abs() <= 1e-8);
    assert!(doc["entropy_after_step"]["nats"].as_f64() < doc["entropy"]["nats"].as_f64());
}
