use std::process::{Command, Output};

use serde_json::Value;

fn sdym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdym")).args(args).env_remove("SDYM_DEFAULT_DEGREE").output().unwrap()
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn without_timing(mut v: Vec<Value>) -> Vec<Value> {
    for r in &mut v {
        r.as_object_mut().unwrap().remove("timing_ms");
    }
    v
}

#[test]
fn parse_prints_canonical_form() {
    let out = sdym(&["parse", "comm(X_zb, tau1)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "X_zb*tau1 + -1*tau1*X_zb");
    let out = sdym(&["parse", "J_y"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "J*X_zb");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(sdym(&["parse", "comm(X"]).status.code(), Some(2));
    assert_eq!(sdym(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(sdym(&["verify", "--suite", "kac-moody", "--levels", "9"]).status.code(), Some(2));
    assert_eq!(sdym(&["hierarchy", "--seed-family", "L:10", "--depth", "1"]).status.code(), Some(2));
    assert_eq!(sdym(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn example_suite_passes_with_sorted_reports() {
    let out = sdym(&["verify", "--suite", "example"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = lines(&out);
    assert_eq!(reports.len(), 3);
    let ids: Vec<&str> = reports.iter().map(|r| r["case"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    for r in &reports {
        assert_eq!(r["schema"], 1);
        assert_eq!(r["status"], "pass");
        assert_eq!(r["config"]["degree"], 6);
        assert!(r["witness"].is_null());
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "--suite", "propositions", "--degree", "4", "--rng-seed", "7"];
    let a = without_timing(lines(&sdym(&args)));
    let b = without_timing(lines(&sdym(&args)));
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn insufficient_degree_fails_with_witness() {
    let out = sdym(&["verify", "--suite", "virasoro", "--levels", "1", "--degree", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let reports = lines(&out);
    let failed: Vec<&Value> = reports.iter().filter(|r| r["status"] == "fail").collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|r| r["witness"].is_string()));
}

#[test]
fn kac_moody_suite() {
    let out = sdym(&["verify", "--suite", "kac-moody", "--levels", "1", "--degree", "6", "--rng-seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = lines(&out);
    assert!(reports.iter().any(|r| r["case"] == "internal/10/12" && r["mode"] == "oracle"));
    assert!(reports.iter().any(|r| r["case"] == "internal/00/12" && r["mode"] == "symbolic"));
    assert!(reports.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn hierarchy_listing() {
    let out = sdym(&["hierarchy", "--seed-family", "internal:1", "--depth", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["levels"][0]["phi"], "X*tau1 + -1*tau1*X");
    assert_eq!(v["levels"][1]["local_in_x"], false);
    assert_eq!(v["nonlocals"].as_array().unwrap().len(), 1);
    let out = sdym(&["hierarchy", "--seed-family", "L:6", "--depth", "1", "--format", "latex"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\\Phi^{(1)}"));
}

#[test]
fn oracle_fixture_and_degree_override() {
    let out = sdym(&["oracle", "--degree", "3", "--rng-seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["fixture"]["label"], "random:42");
    assert_eq!(v["fixture"]["degree"], 3);
    let out = Command::new(env!("CARGO_BIN_EXE_sdym"))
        .args(["oracle", "--fixture", "abelian"])
        .env("SDYM_DEFAULT_DEGREE", "2")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["fixture"]["degree"], 2);
    assert_eq!(v["fixture"]["label"], "abelian");
}
