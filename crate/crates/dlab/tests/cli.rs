//! End-to-end tests of the `dlab` binary: output formats and the exit
//! code contract (0 success/Holds, 1 Fails, 2 parse error, 3 dimension
//! error, 4 lower-bound-only verdicts).

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn space_file(json: Value) -> NamedTempFile {
    let mut f = NamedTempFile::new().expect("temp file");
    write!(f, "{json}").expect("write space JSON");
    f
}

fn dlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlab"))
        .args(args)
        .output()
        .expect("run dlab")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn l1(dim: usize) -> Value {
    serde_json::json!({"type": "lp", "p": 1, "dim": dim})
}

fn linf(dim: usize) -> Value {
    serde_json::json!({"type": "lp", "p": "inf", "dim": dim})
}

#[test]
fn norm_accepts_dense_and_sparse_vectors() {
    let f = space_file(l1(3));
    let path = f.path().to_str().unwrap();

    let out = dlab(&["norm", path, "--vector", "1,-1,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "2.000000000000");

    let out = dlab(&["norm", path, "--vector", "{\"2\": 1}"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "1.000000000000");
}

#[test]
fn norm_handles_renormed_spaces() {
    let f = space_file(serde_json::json!({
        "type": "renorm",
        "base": {"type": "lp", "p": 2, "dim": 3},
    }));
    let out = dlab(&["norm", f.path().to_str().unwrap(), "--vector", "0,-2,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "2.000000000000");
}

#[test]
fn dimension_mismatch_exits_3() {
    let f = space_file(l1(3));
    let out = dlab(&["norm", f.path().to_str().unwrap(), "--vector", "1,0,0,1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn parse_errors_exit_2() {
    let f = space_file(l1(2));
    let path = f.path().to_str().unwrap();

    let out = dlab(&["norm", path, "--vector", "1,x"]);
    assert_eq!(out.status.code(), Some(2));

    let bad = space_file(serde_json::json!({"type": "warp", "dim": 2}));
    let out = dlab(&["norm", bad.path().to_str().unwrap(), "--vector", "1,0"]);
    assert_eq!(out.status.code(), Some(2));

    let out = dlab(&["norm", "/nonexistent/space.json", "--vector", "1,0"]);
    assert_eq!(out.status.code(), Some(2));

    let out = dlab(&["diag", path, "--check", "warp", "--point", "1,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn diag_verdicts_map_to_exit_codes() {
    let f = space_file(l1(3));
    let path = f.path().to_str().unwrap();

    // Holds -> 0.
    let out = dlab(&["diag", path, "--check", "nabla", "--point", "1,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&out)).expect("report JSON");
    assert_eq!(report["property"], "nabla");
    assert_eq!(report["verdict"], "Holds");
    assert_eq!(report["deficiency"].as_f64().unwrap(), 0.0);

    // Fails -> 1, with a refuting witness in the report.
    let out = dlab(&[
        "diag", path, "--check", "dpoint", "--point", "1,0,0", "--alpha", "0.1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&out)).expect("report JSON");
    assert_eq!(report["verdict"], "Fails");
    let achieved = report["witness"]["achieved"].as_f64().unwrap();
    assert!((achieved - 0.2).abs() < 1e-9, "achieved {achieved}");
    assert_eq!(report["params"]["alpha"].as_f64().unwrap(), 0.1);

    // A slice deep enough that every candidate still spans distance 2:
    // the sweep cannot refute, but with several supporting functionals it
    // cannot certify either -> 4.
    let cube = space_file(linf(3));
    let out = dlab(&[
        "diag",
        cube.path().to_str().unwrap(),
        "--check",
        "dpoint",
        "--point",
        "1,1,1",
        "--alpha",
        "0.99",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let report: Value = serde_json::from_str(&stdout(&out)).expect("report JSON");
    assert_eq!(report["verdict"], "LowerBoundOnly");

    // Off-sphere points are rejected as invalid input.
    let out = dlab(&["diag", path, "--check", "nabla", "--point", "0.5,0,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn daugavet_combines_both_checks() {
    let f = space_file(l1(3));
    let out = dlab(&[
        "diag",
        f.path().to_str().unwrap(),
        "--check",
        "daugavet",
        "--point",
        "1,0,0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&out)).expect("report JSON");
    assert_eq!(report["verdict"], "Fails");
    assert_eq!(report["params"]["nabla_deficiency"].as_f64().unwrap(), 0.0);
    assert!(report["params"]["dpoint_deficiency"].as_f64().unwrap() > 1.0);
}

#[test]
fn verify_suite_passes_and_filters() {
    let out = dlab(&["verify-paper"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() > 20);
    assert!(lines[..lines.len() - 1].iter().all(|l| l.starts_with("PASS")));
    assert!(lines.last().unwrap().ends_with("identities hold"));

    let out = dlab(&["verify-paper", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Value = serde_json::from_str(&stdout(&out)).expect("rows JSON");
    let rows = rows.as_array().unwrap();
    assert!(rows.len() >= 20);
    assert!(rows.iter().all(|r| r["pass"] == true));

    let out = dlab(&["verify-paper", "--only", "renorm-"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().count() > 1);
    assert!(text
        .lines()
        .filter(|l| l.starts_with("PASS"))
        .all(|l| l.contains("renorm-")));

    let out = dlab(&["verify-paper", "--only", "no-such-prefix"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_gauge_matches_the_norm() {
    let f = space_file(l1(2));
    let out = dlab(&["oracle", "gauge", f.path().to_str().unwrap(), "--vector", "2,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "2.000000000000");
}

#[test]
fn sweep_rejects_bad_arguments() {
    let out = dlab(&["sweep", "--dims", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = dlab(&["sweep", "--dims", "2..20"]);
    assert_eq!(out.status.code(), Some(2));
    let out = dlab(&["sweep", "--alpha", "0.5,1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = dlab(&["sweep", "--construction", "moebius"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_output_is_deterministic() {
    let args = ["sweep", "--dims", "2..4", "--alpha", "0.5,0.1"];
    let a = dlab(&args);
    let b = dlab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(
        text.lines().next().unwrap(),
        "n,alpha,dpoint_proxy,exposure_margin,witness_distance"
    );
    assert_eq!(text.lines().count(), 1 + 3 * 2);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",2")));
}
