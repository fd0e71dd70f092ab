use std::process::{Command, Output};

fn rcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcf")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = rcf(args);
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn field_units() {
    let out = rcf(&["field", "-d", "-3"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("w: 6"));
}

#[test]
fn rayclass_json_shape() {
    let v = json(&["rayclass", "-d", "-11", "-f", "22", "--json"]);
    for k in ["field", "modulus", "factorization", "rayclass", "hypothesis", "verification", "identities", "warnings"] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
    assert_eq!(v["rayclass"]["order"], 165);
    assert_eq!(v["rayclass"]["snf"], serde_json::json!([165]));
}

#[test]
fn json_is_deterministic() {
    let args = ["check", "-d", "-11", "-f", "22", "--sweep", "--json", "--prec", "128"];
    assert_eq!(rcf(&args).stdout, rcf(&args).stdout);
}

#[test]
fn sweep_passes() {
    let out = rcf(&["check", "-d", "-11", "-f", "22", "--sweep"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.matches("PASS").count(), 8, "{text}");
}

#[test]
fn bad_modulus_is_reported() {
    let out = rcf(&["rayclass", "-d", "-11", "-f", "[3,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn worked_example_flags_split_five() {
    let v = json(&["example-2-8", "--json"]);
    let w = v["warnings"].as_array().unwrap();
    assert!(w.iter().any(|s| s.as_str().unwrap().contains("not a prime ideal")));
    for r in v["verification"].as_array().unwrap() {
        assert_eq!(r["result"]["verdict"], "PASS");
    }
}
