use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flowzeta")).args(args).output().expect("binary runs")
}

fn run_with_report(args: &[&str], dir: &tempfile::TempDir) -> (i32, Value) {
    let path = dir.path().join("report.json");
    let mut all: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    all.extend(["--report", p]);
    let out = run(&all);
    let report = serde_json::from_str(&std::fs::read_to_string(&path).expect("report written")).expect("report is JSON");
    (out.status.code().unwrap(), report)
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("check {name} missing"))
}

#[test]
fn validate_loop_succeeds() {
    let out = run(&["validate", "--model", data("loop.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("model-valid: pass"));
}

#[test]
fn zeta_report_on_the_cat_map() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = run_with_report(&["zeta", "--model", data("catmap.json").to_str().unwrap(), "--order", "12"], &dir);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["command"], "zeta");
    assert_eq!(check(&r, "markov-correction")["status"], "pass");
    assert_eq!(check(&r, "value-at-zero")["status"], "pass");
    assert_eq!(check(&r, "flat-determinants-at-z-one")["status"], "not-certified");
    assert_eq!(r["data"]["euler_product"].as_array().unwrap().len(), 13);
    assert_eq!(r["model"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn torsion_and_fried_on_the_cat_map() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = run_with_report(&["torsion", "--model", data("catmap.json").to_str().unwrap()], &dir);
    assert_eq!(code, 0);
    assert_eq!(check(&r, "fried")["values"]["torsion"], "4/5");
    assert_eq!(check(&r, "torsion-closed-form")["status"], "pass");
    let gradings = r["data"]["complex"]["gradings"].as_array().unwrap();
    assert_eq!(gradings.iter().map(|g| g["rank"].as_u64().unwrap()).collect::<Vec<_>>(), vec![4, 6, 3, 1]);
}

#[test]
fn punctured_torsion_flag() {
    let out = run(&["torsion", "--punctured", "--model", data("catmap.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("punctured-torsion: pass"));
}

#[test]
fn check_all_on_the_branched_instance_reports_class_number() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = run_with_report(&["check-all", "--model", data("branched.json").to_str().unwrap()], &dir);
    let cn = check(&r, "class-number");
    assert_eq!(cn["values"]["snf_value"], "5");
    assert_eq!(cn["values"]["det_i_minus_h"], "5");
    assert_eq!(cn["values"]["formula_value"], "5/4");
    assert_eq!(check(&r, "tau-identity")["values"]["tau_x_times_h1"], "2");
    // the exit code mirrors the statuses
    let failed = r["checks"].as_array().unwrap().iter().any(|c| c["status"] == "fail");
    assert_eq!(code, if failed { 1 } else { 0 });
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let model = data("catmap.json");
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        run(&["check-all", "--model", model.to_str().unwrap(), "--seed", "3", "--report", p.to_str().unwrap()]);
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn orbit_table_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("orbits.csv");
    let out = run(&["orbits", "--model", data("catmap.json").to_str().unwrap(), "--max-cycle-len", "3", "--format", "csv", "--report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("cycle,period,total_time,delta,epsilon,trace"));
    // (1/n) Σ_{d|n} μ(n/d) tr A^d with tr A^n = 3, 7, 18 for A = [[2, 1], [1, 1]]: 3 + 2 + 5
    assert_eq!(lines.count(), 10);
}

#[test]
fn float_backend_override() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = run_with_report(&["zeta", "--model", data("catmap.json").to_str().unwrap(), "--backend", "float", "--order", "10"], &dir);
    assert_eq!(code, 0);
    assert_eq!(r["options"]["backend"], "float");
    assert!(check(&r, "markov-correction")["max_deviation"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["validate", "--model", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["validate", "--model", "/nonexistent/model.json"]).status.code(), Some(2));
    // no cell data for the torsion suite
    assert_eq!(run(&["torsion", "--model", data("loop.json").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn semantic_errors_fail_validation() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"states": ["a"], "edges": [{"id": "e", "from": "a", "to": "b", "r": 1, "delta": 1, "epsilon": 1, "rho": 1}]}"#).unwrap();
    let out = run(&["validate", "--model", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("model-valid: fail"));
    assert_eq!(run(&["zeta", "--model", bad.to_str().unwrap()]).status.code(), Some(2));
}
