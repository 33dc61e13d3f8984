use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fano-workbench"))
}

fn write_input(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run_json(args: &[&str]) -> (i32, Value, String) {
    let out = bin().args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let v = serde_json::from_str(stdout.trim()).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v, stderr)
}

const FERMAT: &str = r#"{"n": 3, "d": 3, "field": "QQ", "form": "x0^3 + x1^3 + x2^3 + x3^3"}"#;

#[test]
fn census_of_the_fermat_cubic() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_input(&dir, "fermat33.json", FERMAT);
    let (code, v, _) = run_json(&["fano", "census", "--input", f.to_str().unwrap(), "--k", "1", "--prime", "7", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 27);
    assert_eq!(v["schema"], "fano-workbench/1");
    assert!(v.get("elapsed_ms").is_none());
}

#[test]
fn bad_prime_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_input(&dir, "fermat33.json", FERMAT);
    let (code, _, err) = run_json(&["fano", "census", "--input", f.to_str().unwrap(), "--k", "1", "--prime", "4"]);
    assert_eq!(code, 2);
    assert!(err.contains("4 is not prime"), "{err}");
    assert!(err.contains("--prime") && err.contains("hint:"));
}

#[test]
fn bounds_k0() {
    let (code, v, _) = run_json(&["bounds", "k0", "--d", "4", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["k0"], 66);
    let (code, v, _) = run_json(&["bounds", "n0", "--d", "3", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["n0"], 11);
    let (code, _, err) = run_json(&["bounds", "k0", "--d", "7"]);
    assert_eq!(code, 2);
    assert!(err.contains("--allow-large"));
}

#[test]
fn bounds_report_accepts_negative_s() {
    let (code, v, _) = run_json(&["bounds", "report", "--n", "3", "--d", "3", "--k", "1", "--s", "-1", "--e", "1", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["expected"]["fano_scheme"], "0");
    let preds = v["predicates"].as_array().unwrap();
    let p = preds.iter().find(|p| p["name"] == "lines_expected_dimension").unwrap();
    assert_eq!(p["holds"], true);
}

#[test]
fn budget_exhaustion_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_input(&dir, "fermat33.json", FERMAT);
    let (code, _, err) = run_json(&["fano", "census", "--input", f.to_str().unwrap(), "--k", "1", "--prime", "13", "--budget", "10"]);
    assert_eq!(code, 3);
    assert!(err.contains("--budget"));
}

#[test]
fn missing_input_and_bad_flags() {
    let (code, _, err) = run_json(&["fano", "census", "--k", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("--input"));
    let (code, _, _) = run_json(&["fano", "census", "--bogus"]);
    assert_eq!(code, 2);
    let (code, _, _) = run_json(&["--help"]);
    assert_eq!(code, 0);
}

#[test]
fn parse_errors_name_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_input(&dir, "bad.json", r#"{"n": 3, "d": 3, "field": "QQ", "form": "x0^3 + x7"}"#);
    let (code, _, err) = run_json(&["fano", "census", "--input", f.to_str().unwrap(), "--k", "1", "--prime", "7"]);
    assert_eq!(code, 2);
    assert!(err.contains("--input"), "{err}");
}

#[test]
fn examples_round_trip_as_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().args(["examples", "planed", "--n", "3", "--d", "3", "--m", "1", "--prime", "7", "--seed", "3", "--json"]).output().unwrap();
    assert!(out.status.success());
    let f = dir.path().join("planed.json");
    std::fs::write(&f, &out.stdout).unwrap();
    let (code, v, _) = run_json(&["unirat", "series", "--input", f.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["basepoints"]["free"], true);
    let (code, v, _) = run_json(&["fano", "census", "--input", f.to_str().unwrap(), "--k", "1", "--json"]);
    assert_eq!(code, 0);
    assert!(v["count"].as_u64().unwrap() >= 1);
}

#[test]
fn curve_splitting_reports_the_bridge() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_input(&dir, "q.json", r#"{"n": 4, "d": 2, "field": {"prime": 7}, "form": "x0*x3 - x1*x2 + x4^2"}"#);
    let (code, v, _) = run_json(&["curve", "splitting", "--input", f.to_str().unwrap(), "--line", "1,0,0,0,0;0,1,0,0,0", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["a"], serde_json::json!([1, 0]));
    assert_eq!(v["free"], true);
    assert_eq!(v["delta_bridge_check"], true);
}

#[test]
fn text_output_and_timing() {
    let out = bin().args(["bounds", "k0", "--d", "3", "--timing"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("k0: 4"));
    assert!(text.contains("elapsed_ms: "));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("elapsed: "));
}

#[test]
fn in_process_runner_matches_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = fano_workbench::run(["fano-workbench", "bounds", "k0", "--d", "5", "--json"], &mut out, &mut err);
    assert_eq!(code, 0);
    let bin_out = bin().args(["bounds", "k0", "--d", "5", "--json"]).output().unwrap();
    assert_eq!(out, bin_out.stdout);
}
