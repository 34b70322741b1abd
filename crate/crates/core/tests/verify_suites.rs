use std::time::Instant;

use quantum_dn::verify::{self, SuiteParams};

fn run(name: &str, params: &SuiteParams) {
    let start = Instant::now();
    let report = verify::run_suite(name, params).unwrap().expect("known suite");
    for c in &report.checks {
        assert!(c.passed, "{name}: {} failed: {}", c.label, c.detail);
    }
    eprintln!("{name}: {} checks in {:?}", report.checks.len(), start.elapsed());
}

fn small() -> SuiteParams {
    SuiteParams { fuzz_cases: 20, confluence_symbols: 15, confluence_trials: 4, ..SuiteParams::default() }
}

#[test]
fn paths_suite() {
    run("paths", &small());
}

#[test]
fn restriction_suite() {
    run("restriction", &small());
}

#[test]
fn universality_suite() {
    run("universality", &small());
}

#[test]
fn appendix_suite() {
    run("appendix", &small());
}

#[test]
fn flatness_suite() {
    run("flatness", &small());
}

#[test]
fn confluence_suite() {
    run("confluence", &small());
}

#[test]
fn unknown_suite_is_none() {
    assert!(verify::run_suite("nope", &small()).unwrap().is_none());
}
