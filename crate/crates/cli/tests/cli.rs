use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn wzw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wzw")).args(args).env_remove("WZW_CACHE_DIR").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = wzw(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn picard_a1_level_four() {
    let r = json(&["--no-cache", "picard", "A1", "4"]);
    assert_eq!(r["schemaVersion"], 1);
    assert_eq!(r["input"], serde_json::json!({"series": "A", "rank": 1, "level": 4}));
    assert_eq!(r["payload"]["group"], "Z2");
    assert_eq!(r["payload"]["elements"][1]["twist"], "0/1");
    assert_eq!(r["payload"]["elements"][1]["weight"], serde_json::json!([4]));
}

#[test]
fn modular_data_a1_level_two() {
    let r = json(&["--no-cache", "modular-data", "A1", "2"]);
    let d = &r["payload"]["data"];
    assert_eq!(d["weights"].as_array().unwrap().len(), 3);
    assert_eq!(d["centralCharge"], "3/2");
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn invariants_a1_level_six() {
    let r = json(&["--no-cache", "invariants", "A1", "6", "--latex"]);
    let algebras = r["payload"]["algebras"].as_array().unwrap();
    assert_eq!(algebras.len(), 2);
    assert_eq!(algebras[0]["support"], serde_json::json!([0]));
    let z = algebras[1]["partition"].as_array().unwrap();
    assert_eq!(z[1][5], 1);
    assert_eq!(z[1][1], 0);
    assert!(algebras[1]["latex"].as_str().unwrap().contains("\\bar\\chi"));
}

#[test]
fn bimodules_and_twining_payloads() {
    let r = json(&["--no-cache", "bimodules", "A2", "2"]);
    let full = &r["payload"]["algebras"][1];
    assert_eq!(full["rank"], 6);
    assert_eq!(full["picard"]["isoClassName"], "Z3");
    let r = json(&["--no-cache", "bimodules", "A1", "4"]);
    assert!(r["payload"]["algebras"][1]["error"].as_str().unwrap().contains("fixed points"));
    let r = json(&["--no-cache", "bimodules", "A1", "4", "--pointed", "--algebra", "1"]);
    assert_eq!(r["payload"]["algebras"][0]["rank"], 2);

    let r = json(&["--no-cache", "--strict", "twining", "A3", "2"]);
    let currents = r["payload"]["currents"].as_array().unwrap();
    assert_eq!(currents.len(), 1);
    assert_eq!(currents[0]["folding"]["folded"]["kind"], "affine");
    assert_eq!(currents[0]["matrix"].as_array().unwrap().len(), 2);
    let r = json(&["--no-cache", "--strict", "verify-conjecture", "A3", "2"]);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn exit_codes() {
    assert_eq!(wzw(&["--no-cache", "picard", "Q3", "1"]).status.code(), Some(2));
    assert_eq!(wzw(&["--no-cache", "picard", "A1", "0"]).status.code(), Some(2));
    assert_eq!(wzw(&["--no-cache", "picard", "A1"]).status.code(), Some(2));
    assert_eq!(wzw(&["--no-cache", "twining", "D4", "2", "--current", "1"]).status.code(), Some(2));
    assert_eq!(wzw(&["--no-cache", "boundaries", "D4", "2", "--algebra", "4"]).status.code(), Some(2));
    let out = wzw(&["--no-cache", "boundaries", "D4", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(wzw(&["--no-cache", "--strict", "boundaries", "D4", "2"]).status.code(), Some(3));
    let out = wzw(&["--no-cache", "--weyl-cap", "10", "modular-data", "A3", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("cap"));
}

#[test]
fn output_round_trips_and_is_deterministic() {
    let args = ["--no-cache", "boundaries", "A3", "2"];
    let a = wzw(&args).stdout;
    assert_eq!(a, wzw(&args).stdout);
    let v: Value = serde_json::from_slice(&a).unwrap();
    let again: Value = serde_json::from_slice(&serde_json::to_vec(&v).unwrap()).unwrap();
    assert_eq!(again, v);
}

fn cached(dir: &Path, args: &[&str]) -> Output {
    let mut full = vec!["--cache-dir", dir.to_str().unwrap()];
    full.extend_from_slice(args);
    wzw(&full)
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("B-2-2.json");
    let first = cached(dir.path(), &["modular-data", "B2", "2"]);
    let bytes = std::fs::read(&file).unwrap();
    let second = cached(dir.path(), &["modular-data", "B2", "2"]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read(&file).unwrap(), bytes);

    std::fs::write(&file, &bytes[..bytes.len() / 2]).unwrap();
    let third = cached(dir.path(), &["--timing", "modular-data", "B2", "2"]);
    assert_eq!(third.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&third.stderr).contains("corrupt"));
    let v: Value = serde_json::from_slice(&third.stdout).unwrap();
    assert_eq!(v["timing"]["cache"], "corrupt");
    assert_eq!(std::fs::read(&file).unwrap(), bytes);

    let env = Command::new(env!("CARGO_BIN_EXE_wzw"))
        .args(["--timing", "picard", "B2", "2"])
        .env("WZW_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&env.stdout).unwrap();
    assert_eq!(v["timing"]["cache"], "hit");
}

#[test]
fn pretty_tables() {
    let out = wzw(&["--no-cache", "--pretty", "modular-data", "A1", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("c = 3/2"));
    assert!(serde_json::from_str::<Value>(&text).is_err());
}

#[test]
fn selftest_surfaces_caps_and_tolerances() {
    let out = wzw(&["--weyl-cap", "10", "selftest"]);
    assert_ne!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let criteria = v["payload"]["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 11);
    assert!(criteria[1]["detail"].as_str().unwrap().contains("exceeds the configured cap"));

    let out = wzw(&["--tolerance", "1e-15", "selftest"]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["payload"]["criteria"][1]["pass"], false);
}

#[test]
fn selftest_exit_status_matches_criteria() {
    let out = wzw(&["selftest"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let criteria = v["payload"]["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 11);
    let all = criteria.iter().all(|c| c["pass"] == true);
    assert_eq!(out.status.code(), Some(if all { 0 } else { 3 }));
}
