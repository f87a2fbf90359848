//! End-to-end tests against the built binary: output formats, exit codes,
//! determinism, and atomic file writes.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spline-affine"))
        .args(args)
        .env_remove("SPLINE_AFFINE_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

#[test]
fn spline_samples_match_known_graph() {
    let out = run(&["spline", "--m", "1", "--samples", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,value");
    assert_eq!(lines[1], "0,0");
    assert!(lines[2].starts_with("0.25") && lines[2].ends_with(",2.00000000000000000000000000000"));
    assert!(lines[3].ends_with(",0"));
    assert!(lines[4].ends_with(",-2.00000000000000000000000000000"));
    assert!(lines[5].ends_with(",0"));
    assert_eq!(lines.len(), 6);
}

#[test]
fn spline_json_round_trips() {
    let out = run(&["spline", "--m", "2", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["m"], 2);
    assert_eq!(v["kappa"], "128");
    assert_eq!(v["poly"]["level"], 3);
    assert_eq!(v["poly"]["degree"], 2);
    assert_eq!(v["poly"]["pieces"].as_array().unwrap().len(), 8);
}

#[test]
fn enum_table_layout() {
    let out = run(&["enum", "--depth", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,paley_n,natural_n,chaos_order");
    assert_eq!(lines[1], "e,1,1,1");
    assert!(lines.contains(&"10,5,6,2"));
    assert!(lines.contains(&"11,7,7,3"));
    assert_eq!(lines.len(), 1 + 1 + 2 + 4);
}

#[test]
fn chaos_csv_contains_expected_rows() {
    let out = run(&["chaos", "--m", "1", "--max-index", "16", "--csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1,e,1,1,1"));
    assert!(text.contains("7,11,3,-1,2"));
    assert!(text.contains("11,110,3,-1,4"));
    assert!(text.contains("# gamma,0,1"));
    assert!(text.contains("# order3_ok,true"));
}

#[test]
fn riesz_json_schema_and_pass() {
    let out = run(&["riesz", "--m", "1", "--depth", "3", "--max-index", "64"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in [
        "m",
        "depth",
        "lambda_min",
        "lambda_max",
        "A_est",
        "B_est",
        "deviation_norm",
        "norm_sum",
        "pass",
        "eig_residual",
    ] {
        assert!(v.get(key).is_some(), "missing key {key}");
    }
    assert_eq!(v["pass"], true);
    assert!(v["lambda_min"].as_f64().unwrap() >= 0.01);
    assert!(v["lambda_max"].as_f64().unwrap() <= 3.61);
    assert_eq!(v["norm_sum"].as_array().unwrap().len(), 2);
}

#[test]
fn gram_haar_identity() {
    let out = run(&["gram", "--m", "0", "--depth", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1+0*sqrt2,0+0*sqrt2\n0+0*sqrt2,1+0*sqrt2\n");
}

#[test]
fn verify_exits_zero_on_pass() {
    let out = run(&["verify", "--m", "1", "--depth", "3", "--max-index", "64"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("overall: PASS"));
    assert!(text.lines().count() >= 3);
}

#[test]
fn invalid_arguments_exit_2() {
    for args in [
        &["riesz", "--m", "99", "--depth", "5"][..],
        &["riesz", "--m", "2", "--depth", "50"][..],
        &["chaos", "--m", "1", "--max-index", "3"][..],
        &["spline", "--m", "0"][..],
        &["riesz", "--m", "1", "--tol", "-1"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
        assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
    }
}

#[test]
fn computation_error_preserved_distinct_from_usage() {
    // subcommand without required argument is a usage error
    let out = run(&["spline"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn byte_identical_reruns() {
    for args in [
        &["spline", "--m", "2", "--samples", "16"][..],
        &["riesz", "--m", "1", "--depth", "3", "--max-index", "64"][..],
        &["chaos", "--m", "2", "--max-index", "64"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "args: {args:?}");
    }
}

#[test]
fn out_flag_writes_file_matching_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let direct = run(&["enum", "--depth", "3"]);
    let filed = run(&["enum", "--depth", "3", "--out", path.to_str().unwrap()]);
    assert!(filed.status.success());
    assert!(filed.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn thread_cap_env_is_validated() {
    let ok = Command::new(env!("CARGO_BIN_EXE_spline-affine"))
        .args(["enum", "--depth", "1"])
        .env("SPLINE_AFFINE_THREADS", "1")
        .output()
        .unwrap();
    assert!(ok.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_spline-affine"))
        .args(["enum", "--depth", "1"])
        .env("SPLINE_AFFINE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn out_path_in_current_directory_works() {
    // regression: parent of a bare filename is the empty path
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_spline-affine"))
        .args(["enum", "--depth", "1", "--out", "bare.csv"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(Path::new(&dir.path().join("bare.csv")).exists());
}
