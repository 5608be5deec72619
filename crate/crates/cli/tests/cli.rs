use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn quantinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quantinv")).args(args).output().expect("binary runs")
}

fn system(dir: &TempDir, name: &str, json: &str) -> String {
    let path: PathBuf = dir.path().join(name);
    fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn analyze_uldi_system_exits_zero() {
    let dir = TempDir::new().unwrap();
    let f = system(&dir, "s.json", r#"{"a": "3/2", "inputs": ["0", "3"]}"#);
    let out = quantinv(&["analyze", &f]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["uli"]["status"], "ULI_ONE_STEP");
}

#[test]
fn analyze_gap_and_contractive_exit_codes() {
    let dir = TempDir::new().unwrap();
    let gap = system(&dir, "gap.json", r#"{"a": "1", "inputs": ["0", "1"]}"#);
    let out = quantinv(&["analyze", &gap]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["uli"]["status"], "UNDECIDED_GAP");
    let con = system(&dir, "con.json", r#"{"a": "1/2", "inputs": ["0", "1"]}"#);
    assert_eq!(quantinv(&["analyze", &con]).status.code(), Some(3));
}

#[test]
fn analyze_crosscheck_agrees() {
    let dir = TempDir::new().unwrap();
    let f = system(&dir, "s.json", r#"{"a": "3", "inputs": ["0", "1"]}"#);
    let out = quantinv(&["analyze", &f, "--crosscheck", "--depth", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["uli"]["status"], "NOT_ULI");
    assert_eq!(v["oracle_crosscheck"]["consistent"], true);
}

#[test]
fn reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let f = system(&dir, "s.json", r#"{"a": "10/9", "inputs": ["0", "1/2"]}"#);
    let a = quantinv(&["analyze", &f, "--crosscheck"]);
    let b = quantinv(&["analyze", &f, "--crosscheck"]);
    assert_eq!(a.stdout, b.stdout);
    let t1 = quantinv(&["analyze", &f, "--format", "text"]);
    let t2 = quantinv(&["analyze", &f, "--format", "text"]);
    assert_eq!(t1.stdout, t2.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let f = system(&dir, "s.json", r#"{"a": "3/2", "inputs": ["0", "3"]}"#);
    let target = dir.path().join("report.json");
    let out = quantinv(&["analyze", &f, "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["uli"]["k"], 1);
}

#[test]
fn repro_example_lists_exceptional_q() {
    let out = quantinv(&["repro-example", "--tau", "1/2", "--qmax", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let qs: Vec<u64> = v["q_list"].as_array().unwrap().iter().map(|q| q.as_u64().unwrap()).collect();
    assert_eq!(qs, vec![1, 3, 4, 5, 6, 7, 8, 9, 10]);
    assert_eq!(v["h_values"], serde_json::json!(["1", "1/2"]));
}

#[test]
fn point_subcommands() {
    let v = json(&quantinv(&["epsilon", "3/2"]));
    assert_eq!(v["best"], "1/3");
    let v = json(&quantinv(&["orbit", "2", "-2,0,2", "(-1,1)"]));
    assert_eq!(v["kind"], "PERIODIC_WITNESS");
    assert_eq!(v["cycle"]["z_star"], "-2/3");
    let v = json(&quantinv(&["classify", "--tau", "2", "--qmax", "100"]));
    assert_eq!(v["hits"], serde_json::json!([]));
    let v = json(&quantinv(&["mahler", "-3,2"]));
    assert_eq!(v["measure"]["lower"], "3");
    let v = json(&quantinv(&["probe", "3/2", "--zeta", "0,0", "--grid", "100"]));
    assert_eq!(v["estimate"], "0.000000000000");
}

#[test]
fn invert_and_counterexample() {
    let dir = TempDir::new().unwrap();
    let f = system(&dir, "s.json", r#"{"a": "1", "inputs": ["0", "3"]}"#);
    let v = json(&quantinv(&["invert", &f, "--outputs", "0,3,3"]));
    assert_eq!(v["inputs"], serde_json::json!(["3", "0"]));
    let bad = quantinv(&["invert", &f, "--outputs", "0,2"]);
    assert_eq!(bad.status.code(), Some(65));
    let g = system(&dir, "g.json", r#"{"a": "3", "inputs": ["0", "1"]}"#);
    let v = json(&quantinv(&["counterexample", &g, "--length", "8"]));
    assert_eq!(v["inputs"].as_array().unwrap().len(), 8);
    let v = json(&quantinv(&["bruteforce", &g, "--depth", "4"]));
    assert_eq!(v["outcome"], "witness");
}

#[test]
fn usage_and_data_errors() {
    assert_eq!(quantinv(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(quantinv(&["epsilon", "3/2", "--no-such-flag"]).status.code(), Some(64));
    assert_eq!(quantinv(&["epsilon", "abc"]).status.code(), Some(64));
    assert_eq!(quantinv(&["analyze", "/nonexistent/system.json"]).status.code(), Some(65));
    let dir = TempDir::new().unwrap();
    let f = system(&dir, "bad.json", r#"{"a": "2", "inputs": []}"#);
    assert_eq!(quantinv(&["analyze", &f]).status.code(), Some(65));
    assert_eq!(quantinv(&["--help"]).status.code(), Some(0));
}

#[test]
fn help_documents_flags() {
    let out = quantinv(&["analyze", "--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for flag in ["--crosscheck", "--depth", "--max-period", "--out", "--format", "--timings"] {
        assert!(text.contains(flag), "{flag} missing from help");
    }
}
