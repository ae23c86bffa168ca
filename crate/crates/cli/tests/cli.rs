use std::process::{Command, Output};

use serde_json::Value;

fn scanstat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scanstat")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, String) {
    let out = scanstat(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    (serde_json::from_str(&text).unwrap(), text)
}

fn assert_round_trip(args: &[&str]) {
    let (value, text) = json(args);
    assert_eq!(value["schema"], 1);
    assert_eq!(serde_json::to_string_pretty(&value).unwrap(), text.trim_end());
}

#[test]
fn documented_evaluations() {
    let (v, _) = json(&["eval", "--stat", "p-3", "--N", "3", "--w", "1/2", "--format", "json"]);
    assert_eq!(v["p"], "1/2");
    let (v, _) = json(&["eval", "--stat", "pc-3", "--N", "10", "--w", "1/5", "--format", "json"]);
    assert_eq!((v["p"].as_str(), v["regime"].as_str()), (Some("1"), Some("SATURATED")));
    let (v, _) = json(&["eval", "--stat", "pc-nm1", "--N", "3", "--w", "1/6", "--format", "json"]);
    assert_eq!(v["p"], "3/4");
    assert_eq!(v["regime"], "BELOW_THRESHOLD");
}

#[test]
fn decimal_widths_are_exact() {
    let (v, _) = json(&["eval", "--stat", "pc-3", "--N", "4", "--w", "0.25", "--format", "json"]);
    assert_eq!((v["w"].as_str(), v["p"].as_str()), (Some("1/4"), Some("1/2")));
}

#[test]
fn float_mode_omits_exact_fields() {
    let (v, _) = json(&["eval", "--stat", "p-3", "--N", "3", "--w", "1/2", "--mode", "float", "--format", "json"]);
    assert!(v["p"].is_null());
    assert!((v["p_float"].as_f64().unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn text_output() {
    let out = scanstat(&["eval", "--stat", "p-3", "--N", "3", "--w", "3/5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("p = 81/125"));
}

#[test]
fn json_round_trips() {
    assert_round_trip(&["eval", "--stat", "pc-3", "--N", "7", "--w", "1/9", "--format", "json"]);
    assert_round_trip(&["table", "--stat", "pc-nm1", "--N", "3..6", "--grid", "5", "--format", "json"]);
    assert_round_trip(&["simulate", "--N", "5", "--k", "3", "--w", "1/5,3/10", "--samples", "2000", "--format", "json"]);
    assert_round_trip(&["verify-series", "--order", "4", "--format", "json"]);
    assert_round_trip(&["cross-check", "--n-max", "6", "--grid", "5", "--pathway-n-max", "5", "--format", "json"]);
}

#[test]
fn table_csv() {
    let out = scanstat(&["table", "--stat", "p-3", "--N", "3,4", "--w", "1/2,1/4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("schema,stat,N,w,p_exact"));
    assert!(lines[1].starts_with("1,p-3,3,1/2,1/2,"));
}

#[test]
fn simulation_is_reproducible() {
    let args = ["simulate", "--N", "6", "--k", "3", "--geometry", "linear", "--w", "1/10,1/5", "--samples", "5000"];
    let (a, b) = (scanstat(&args), scanstat(&args));
    assert_eq!(a.stdout, b.stdout);
    let other = scanstat(&[&args[..], &["--seed", "7"]].concat());
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn simulation_checked_against_exact() {
    let base = ["simulate", "--N", "5", "--k", "3", "--w", "3/10", "--samples", "200000"];
    assert_eq!(scanstat(&[&base[..], &["--check", "4"]].concat()).status.code(), Some(0));
    let cover = ["simulate", "--N", "4", "--k", "3", "--w", "1/4", "--samples", "200000", "--coverage", "--check", "4"];
    assert_eq!(scanstat(&cover).status.code(), Some(0));
}

#[test]
fn exit_codes() {
    // usage errors
    assert_eq!(scanstat(&["eval", "--stat", "pc-4", "--N", "5", "--w", "1/3"]).status.code(), Some(2));
    assert_eq!(scanstat(&["eval", "--stat", "pc-3", "--N", "5", "--w", "0.1.2"]).status.code(), Some(2));
    assert_eq!(scanstat(&["eval", "--stat", "pc-3", "--N", "5"]).status.code(), Some(2));
    assert_eq!(scanstat(&["bogus"]).status.code(), Some(2));
    // domain errors
    assert_eq!(scanstat(&["eval", "--stat", "pc-3", "--N", "2", "--w", "1/3"]).status.code(), Some(2));
    assert_eq!(scanstat(&["eval", "--stat", "p-3", "--N", "5", "--w", "3/2"]).status.code(), Some(2));
    assert_eq!(scanstat(&["table", "--stat", "p-3", "--N", "2..4", "--grid", "3"]).status.code(), Some(2));
    assert_eq!(scanstat(&["simulate", "--N", "3", "--k", "4", "--w", "1/2"]).status.code(), Some(2));
    assert_eq!(scanstat(&["verify-measures", "--n-max", "9"]).status.code(), Some(2));
    // verification failure: an interval far too narrow to hold the exact value
    let narrow = ["simulate", "--N", "5", "--k", "3", "--w", "3/10", "--samples", "1000", "--check", "0.001"];
    let out = scanstat(&narrow);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stdout.is_empty());
}

#[test]
fn verification_commands_pass() {
    let out = scanstat(&["verify-series", "--order", "6"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = scanstat(&["cross-check", "--n-max", "12", "--grid", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("[PASS] pc-nm1(4,w) = pc-3(4,w)"));
    let (v, _) = json(&["verify-measures", "--n-max", "3", "--samples", "200000", "--no-recursion", "--format", "json"]);
    assert!(v["report"]["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    assert!(!v["rows"].as_array().unwrap().is_empty());
}
