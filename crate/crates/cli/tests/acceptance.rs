//! One line per acceptance criterion, printed whether or not it passes.

use std::io::Write;
use std::process::Command;
use std::sync::OnceLock;

use wzw_core::battery::{self, Catalog, CriterionOutcome};
use wzw_core::Config;

const TOLERANCE: f64 = 1e-8;
const INTEGRALITY_TOLERANCE: f64 = 1e-6;
const S_ORACLE_TOLERANCE: f64 = 1e-9;

fn config() -> Config {
    let c = Config::default();
    assert_eq!(c.tolerance, TOLERANCE);
    assert_eq!(c.integrality_tolerance, INTEGRALITY_TOLERANCE);
    assert_eq!(battery::S_ORACLE_TOLERANCE, S_ORACLE_TOLERANCE);
    c
}

fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| Catalog::build(&config()).expect("catalog builds"))
}

fn report(o: CriterionOutcome) {
    writeln!(std::io::stderr().lock(), "{}", o.line()).unwrap();
    assert!(o.pass, "{}", o.line());
}

#[test]
fn criterion_01_s_matrix_oracle() {
    report(battery::s_matrix_oracle(&config()));
}

#[test]
fn criterion_02_modular_relations() {
    report(battery::modular_relations(catalog(), &config()));
}

#[test]
fn criterion_03_fusion() {
    report(battery::fusion_rules(catalog(), &config()));
}

#[test]
fn criterion_04_picard_groups() {
    report(battery::picard_groups(catalog()));
}

#[test]
fn criterion_05_quadratic_form() {
    report(battery::quadratic_form(catalog()));
}

#[test]
fn criterion_06_partition_functions() {
    report(battery::partition_functions(catalog(), &config()));
}

#[test]
fn criterion_07_boundary_counts() {
    report(battery::boundary_counts(catalog(), &config()));
}

#[test]
fn criterion_08_bimodule_ring() {
    report(battery::bimodule_ring(catalog()));
}

#[test]
fn criterion_09_duality_defects() {
    report(battery::duality_defects(catalog()));
}

#[test]
fn criterion_10_twining_and_phi() {
    report(battery::twining_conjecture(catalog(), &config()));
}

#[test]
fn criterion_11_determinism() {
    let run = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_wzw")).args(args).env_remove("WZW_CACHE_DIR").output().unwrap();
    let mut bad = Vec::new();
    for args in [
        &["--no-cache", "modular-data", "G2", "2"][..],
        &["--no-cache", "invariants", "D4", "2", "--latex"],
        &["--no-cache", "twining", "A3", "2"],
        &["--no-cache", "bimodules", "A2", "2"],
    ] {
        let a = run(args);
        let b = run(args);
        if !a.status.success() || a.stdout != b.stdout {
            bad.push(format!("{args:?} differs between runs"));
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let miss = run(&["--cache-dir", d, "modular-data", "A3", "2"]);
    let stored = std::fs::read(dir.path().join("A-3-2.json")).unwrap();
    let hit = run(&["--cache-dir", d, "modular-data", "A3", "2"]);
    if miss.stdout != hit.stdout {
        bad.push("cache hit differs from miss".into());
    }
    if std::fs::read(dir.path().join("A-3-2.json")).unwrap() != stored {
        bad.push("re-stored cache document differs".into());
    }
    let detail = if bad.is_empty() { "repeated invocations and cache round trip byte-identical".to_string() } else { bad.join(", ") };
    report(CriterionOutcome { id: 11, name: "determinism".into(), pass: bad.is_empty(), detail });
}
