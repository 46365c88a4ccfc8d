use std::process::{Command, Output};

use serde_json::Value;

fn vtree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vtree")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn sigma_has_order_two() {
    let out = vtree(&["order", "--element", "builtin:sigma"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["order"], "2");
}

#[test]
fn x0_dynamics() {
    let out = vtree(&["dynamics", "--element", "builtin:x0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["per_att"], serde_json::json!(["(1)^inf"]));
    assert_eq!(v["per_rep"], serde_json::json!(["(0)^inf"]));
}

#[test]
fn inverse_round_trips_through_compose() {
    let inv = json(&vtree(&["inverse", "--element", "builtin:x0"]));
    let inv = inv["element"].as_str().unwrap().to_string();
    let out = vtree(&["compose", "--element", "builtin:x0", "--element", &inv]);
    assert_eq!(out.status.code(), Some(0));
    let back = json(&vtree(&["order", "--element", json(&out)["element"].as_str().unwrap()]));
    assert_eq!(back["order"], "1");
}

#[test]
fn malformed_input_exits_with_three() {
    let out = vtree(&["apply", "--element", "builtin:x0", "--point", "0X"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
    let out = vtree(&["inverse", "--element", "builtin:nope"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn exhausted_budgets_exit_with_two() {
    let out = vtree(&[
        "--budget-word-length", "0",
        "--budget-orbit-size", "1",
        "--budget-expansion-depth", "0",
        "--budget-dovetail-steps", "1",
        "dichotomy", "--gens", "builtin",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["verdict"], "Undecided");
}

#[test]
fn dichotomy_report_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = vtree(&["dichotomy", "--gens", "builtin"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "PingPong");
    let path = dir.path().join("report.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let check = vtree(&["pingpong-verify", "--report", path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0));
}

#[test]
fn tampered_report_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = json(&vtree(&["dichotomy", "--gens", "builtin"]));
    let pp = v["pingpong"].as_object_mut().unwrap();
    let u1 = pp["U1"].clone();
    pp.insert("V1".into(), u1);
    let path = dir.path().join("bad.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let check = vtree(&["pingpong-verify", "--report", path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(1));
}
