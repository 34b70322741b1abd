use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use quantum_dn::frobenius::PerturbedSeries;
use quantum_dn::weyl::QDOperator;

fn qdn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdn")).args(args).output().expect("qdn runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn golden(name: &str) -> PerturbedSeries {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden").join(name);
    std::fs::read_to_string(path).unwrap().parse().unwrap()
}

#[test]
fn projective_quantum_operator_from_a_spec_file() {
    let spec = json_file(r#"{"assign": {"a_0_0": 0, "a_0_1": 0, "a_1_1": 0, "a_1_2": 0, "a_2_2": 0, "a_0_2": "27"}}"#);
    let out = qdn(&["operator", "--n", "2", "--kind", "quantum", "--spec", spec.path().to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "D^3 - 27*q^3\n");
    assert_eq!(stdout(&qdn(&["operator", "--pn", "2", "--kind", "quantum"])), "D^3 - 27*q^3\n");
}

#[test]
fn geometric_dn_operator() {
    let out = qdn(&["operator", "--n", "1", "--kind", "dn", "--geometric"]);
    let op: QDOperator = stdout(&out).trim().parse().unwrap();
    assert_eq!(op, "D - a_1_1*q*D - a_0_1*q^2*(D+1)".parse().unwrap());
}

#[test]
fn operator_json_round_trips() {
    let out = qdn(&["operator", "--n", "2", "--format", "json"]);
    let op: QDOperator = serde_json::from_slice(&out.stdout).unwrap();
    let text = qdn(&["operator", "--n", "2"]);
    assert_eq!(op, stdout(&text).trim().parse().unwrap());
}

#[test]
fn reduce_examples() {
    assert_eq!(stdout(&qdn(&["reduce", "<H^1, H^2, H_1>"])), "a_1_2\n");
    assert_eq!(stdout(&qdn(&["reduce", "<H_1>"])), "a_1_1\n");
    assert_eq!(stdout(&qdn(&["reduce", "⟨τ_0 H_0⟩"])), "1/4*a_0_1\n");
    let zero = qdn(&["reduce", "<H^1, H_4>"]);
    assert!(zero.status.success());
    assert_eq!(stdout(&zero), "0\n");
    assert!(String::from_utf8_lossy(&zero.stderr).contains("vanishes"));
}

#[test]
fn analytic_solution_of_l2_matches_golden() {
    let out = qdn(&["solve", "--n", "2", "--kind", "dn", "--qmax", "4", "--hmax", "1"]);
    assert!(out.status.success());
    let got: PerturbedSeries = stdout(&out).parse().unwrap();
    assert_eq!(got, golden("l2_analytic.txt"));
    let json = qdn(&["solve", "--n", "2", "--qmax", "4", "--hmax", "1", "--format", "json"]);
    assert_eq!(serde_json::from_slice::<PerturbedSeries>(&json.stdout).unwrap(), got);
}

#[test]
fn projective_solution_and_log_basis() {
    let out = qdn(&["solve", "--pn", "2", "--qmax", "6"]);
    let s: PerturbedSeries = stdout(&out).parse().unwrap();
    assert_eq!(s.get(0, 3).to_string(), "6");
    assert_eq!(s.get(0, 6).to_string(), "90");
    let logs = stdout(&qdn(&["solve", "--pn", "2", "--qmax", "3", "--log"]));
    assert!(logs.starts_with("S_0\n"));
    let s2 = logs.split("S_2\n").nth(1).unwrap();
    assert!(s2.contains("t^2 q^0: 1/2\n") && s2.contains("t^2 q^3: 3\n"), "{logs}");
}

#[test]
fn universal_series_restricts() {
    let out = qdn(&["universal", "--qmax", "2", "--hmax", "2", "--regularized"]);
    let s: PerturbedSeries = stdout(&out).parse().unwrap();
    assert_eq!(s.get(0, 2).to_string(), "1/2*a_0_1");
    let r = qdn(&["universal", "--qmax", "2", "--hmax", "2", "--n", "1"]);
    assert!(!stdout(&r).contains("a_1_2"));
}

#[test]
fn verify_exit_codes() {
    let ok = qdn(&["verify", "restriction"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).ends_with("restriction: passed\n"));
    let report: serde_json::Value =
        serde_json::from_slice(&qdn(&["verify", "paths", "--format", "json"]).stdout).unwrap();
    assert_eq!(report["passed"], serde_json::Value::Bool(true));
    assert_eq!(qdn(&["verify", "no-such-suite"]).status.code(), Some(2));
}

#[test]
fn configuration_errors_exit_with_two() {
    assert_eq!(qdn(&["reduce", "<H^1"]).status.code(), Some(2));
    assert_eq!(qdn(&["operator"]).status.code(), Some(2));
    assert_eq!(qdn(&["solve", "--n", "1", "--kind", "quantum", "--hmax", "3"]).status.code(), Some(2));
    assert_eq!(qdn(&["operator", "--n", "2", "--spec", "/nonexistent.json"]).status.code(), Some(2));
    let bad = json_file(r#"{"command": "solve", "n": 2, "bogus": true}"#);
    assert_eq!(qdn(&["--config", bad.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(qdn(&["--bogus"]).status.code(), Some(2));
}

#[test]
fn config_file_matches_flags() {
    let job = json_file(r#"{"command": "solve", "n": 2, "qmax": 4, "hmax": 1}"#);
    let from_file = qdn(&["--config", job.path().to_str().unwrap()]);
    let from_flags = qdn(&["solve", "--n", "2", "--qmax", "4", "--hmax", "1"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, from_flags.stdout);
    let job = json_file(r#"{"command": "reduce", "symbol": "<H_1>", "format": "latex"}"#);
    assert_eq!(stdout(&qdn(&["--config", job.path().to_str().unwrap()])), "a_{11}\n");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["solve", "--n", "3", "--qmax", "4"][..],
        &["universal", "--qmax", "3", "--format", "json"][..],
        &["verify", "restriction", "--format", "json"][..],
    ] {
        let a = qdn(args);
        let b = qdn(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn documented_samples_reproduce() {
    let samples = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/samples");
    let job = samples.join("solve_l2.json");
    let out = qdn(&["--config", job.to_str().unwrap()]);
    assert_eq!(stdout(&out), std::fs::read_to_string(samples.join("solve_l2.out")).unwrap());
    let spec = samples.join("p2.json");
    assert_eq!(
        stdout(&qdn(&["operator", "--n", "2", "--kind", "quantum", "--spec", spec.to_str().unwrap()])),
        "D^3 - 27*q^3\n"
    );
    let reduce = samples.join("reduce.json");
    let v: String = serde_json::from_slice(&qdn(&["--config", reduce.to_str().unwrap()]).stdout).unwrap();
    assert_eq!(v, stdout(&qdn(&["reduce", "<t1 H^2, H^1, H_0>"])).trim());
}
