//! Named consistency suites. Each returns a [`Report`] listing individual
//! checks; the command-line tool prints them and sets its exit status.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dnbuild::{
    connection_matrix, dn_operator, dn_operator_via_regularization, quantum_operator, restrict_r_n, DNConfig,
};
use crate::exactalg::{CoefPoly, Rational};
use crate::frobenius::{appendix_relations_check, check_perturbed, newton_solve, PerturbedSeries};
use crate::gwring::{
    phi_constant_term_is_identity, phi_flatness, phi_flatness_against, phi_matrix, GWSymbol, Reducer, Slot,
};
use crate::weyl::QDOperator;
use crate::Error;

pub const SUITES: [&str; 6] = ["paths", "restriction", "universality", "appendix", "flatness", "confluence"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(suite: &str, checks: Vec<Check>) -> Self {
        Report { suite: suite.to_string(), passed: checks.iter().all(|c| c.passed), checks }
    }
}

fn check(label: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { label: label.into(), passed, detail: detail.into() }
}

/// Tunable sizes for the suites; defaults match the documented runs.
#[derive(Clone, Debug)]
pub struct SuiteParams {
    pub seed: u64,
    pub fuzz_cases: usize,
    pub confluence_symbols: usize,
    pub confluence_trials: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams { seed: 20240601, fuzz_cases: 50, confluence_symbols: 100, confluence_trials: 100 }
    }
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<Option<Report>, Error> {
    Ok(Some(match name {
        "paths" => paths(3)?,
        "restriction" => restriction()?,
        "universality" => universality(5, 7, 4)?,
        "appendix" => appendix(params.fuzz_cases, params.seed)?,
        "flatness" => flatness(2, 2)?,
        "confluence" => confluence(params.confluence_symbols, params.confluence_trials, params.seed)?,
        _ => return Ok(None),
    }))
}

/// Both constructions of `L_N` agree, with and without `a_0_0`.
pub fn paths(n_max: u32) -> Result<Report, Error> {
    let mut checks = Vec::new();
    for n in 1..=n_max {
        for cfg in [DNConfig::new(n), DNConfig::geometric(n)] {
            let direct = dn_operator(&cfg)?;
            let via = dn_operator_via_regularization(&cfg)?;
            let label = format!("N={n} a00={}", if cfg.include_a00 { "symbolic" } else { "0" });
            checks.push(check(
                label,
                direct == via,
                if direct == via { String::new() } else { format!("{direct} != {via}") },
            ));
        }
    }
    Ok(Report::new("paths", checks))
}

/// Analytic solution of `L_N` (with `a_0_0`) through `q^{q_max}`.
pub fn analytic_solution(n: u32, q_max: usize) -> Result<PerturbedSeries, Error> {
    Ok(newton_solve(&dn_operator(&DNConfig::new(n))?, 1, q_max)?)
}

/// Killing `a_i3` in the `L_3` solution gives the `L_2` solution, and the
/// two differ at `q^4` by `3/32 a_0_3` alone.
pub fn restriction() -> Result<Report, Error> {
    let l2 = analytic_solution(2, 4)?;
    let l3 = analytic_solution(3, 4)?;
    let restricted = restrict_r_n(&l3, 2, false);
    let diff = &l3.get(0, 4) - &l2.get(0, 4);
    let expected: CoefPoly = "3/32*a_0_3".parse()?;
    let lower_equal = (0..4).all(|m| l2.get(0, m) == l3.get(0, m));
    Ok(Report::new(
        "restriction",
        vec![
            check("r_2(L_3 solution) = L_2 solution through q^4", restricted == l2, ""),
            check("solutions coincide through q^3", lower_equal, ""),
            check("q^4 difference is 3/32*a_0_3", diff == expected, diff.to_string()),
        ],
    ))
}

/// Analytic solutions of `L_{n1}` and `L_{n2}` agree modulo `q^order`.
pub fn universality(n1: u32, n2: u32, order: usize) -> Result<Report, Error> {
    let a = analytic_solution(n1, order - 1)?;
    let b = analytic_solution(n2, order - 1)?;
    let first_diff = (0..order).find(|&m| a.get(0, m) != b.get(0, m));
    Ok(Report::new(
        "universality",
        vec![check(
            format!("L_{n1} and L_{n2} solutions agree mod q^{order}"),
            first_diff.is_none(),
            first_diff.map(|m| format!("differ at q^{m}")).unwrap_or_default(),
        )],
    ))
}

fn random_coupling(rng: &mut ChaCha8Rng, n: u32) -> CoefPoly {
    let i = rng.gen_range(0..=n);
    let j = rng.gen_range(i..=n);
    let c = Rational::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=4).into());
    CoefPoly::a(i, j).scale(&c)
}

/// An operator built by [`crate::dnbuild`] with its natural `h` truncation.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub name: String,
    pub n: u32,
    pub op: QDOperator,
    pub h_max: usize,
}

/// `L^Q_N` and `L_N` for `N ≤ n_max`, with and without `a_0_0`.
pub fn operator_family(n_max: u32) -> Result<Vec<FamilyMember>, Error> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for cfg in [DNConfig::new(n), DNConfig::geometric(n)] {
            let tag = if cfg.include_a00 { "" } else { " geometric" };
            let h = n as usize;
            out.push(FamilyMember { name: format!("L^Q_{n}{tag}"), n, op: quantum_operator(&cfg), h_max: h + 1 });
            out.push(FamilyMember { name: format!("L_{n}{tag}"), n, op: dn_operator(&cfg)?, h_max: h });
        }
    }
    Ok(out)
}

/// Compares the two perturbed-solution criteria on solver output and on
/// randomly perturbed series. They must agree on the first failing order.
pub fn appendix(cases: usize, seed: u64) -> Result<Report, Error> {
    let q_max = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family = operator_family(2)?;
    let mut checks = Vec::new();
    let compare = |label: String, p: &QDOperator, s: &PerturbedSeries| {
        let a = check_perturbed(p, s).witness.map(|w| w.q);
        let b = appendix_relations_check(p, s).witness.map(|w| w.q);
        check(label, a == b, format!("definition: {a:?}, relations: {b:?}"))
    };
    for f in &family {
        let s = newton_solve(&f.op, f.h_max, q_max)?;
        checks.push(compare(format!("{} solver output", f.name), &f.op, &s));
    }
    for case in 0..cases {
        let f = &family[rng.gen_range(0..family.len())];
        let mut s = newton_solve(&f.op, f.h_max, q_max)?;
        let bumps = rng.gen_range(0..=2);
        for _ in 0..bumps {
            let i = rng.gen_range(0..f.h_max);
            let m = rng.gen_range(1..=q_max);
            let bumped = &s.get(i, m) + &random_coupling(&mut rng, f.n);
            s.set(i, m, bumped);
        }
        checks.push(compare(format!("fuzz case {case} on {} ({bumps} perturbations)", f.name), &f.op, &s));
    }
    Ok(Report::new("appendix", checks))
}

/// Flatness of the fundamental solution built from reduced invariants,
/// plus a negative control with one connection entry removed.
pub fn flatness(n: u32, q_max: usize) -> Result<Report, Error> {
    let reducer = Reducer::default();
    let phi = phi_matrix(&reducer, n, q_max)?;
    let witness = phi_flatness(&reducer, n, q_max)?;
    let mut broken = connection_matrix(&DNConfig::geometric(n));
    broken.set(0, 1, QDOperator::zero());
    let control = phi_flatness_against(&reducer, n, q_max, &broken)?;
    Ok(Report::new(
        "flatness",
        vec![
            check("constant term is the identity", phi_constant_term_is_identity(&phi), ""),
            check(format!("N={n} flat through q^{q_max}"), witness.is_none(), format!("{witness:?}")),
            check("zeroed connection entry is detected", control.is_some(), format!("{control:?}")),
        ],
    ))
}

/// Random symbol with at most five points, exponents at most 4, at most
/// three descendants in total and degree between 1 and 6.
pub fn random_symbol(rng: &mut ChaCha8Rng) -> GWSymbol {
    loop {
        let n = rng.gen_range(1..=5);
        let mut budget = 3;
        let mut slot = |rng: &mut ChaCha8Rng| {
            let d = rng.gen_range(0..=budget.min(2));
            budget -= d;
            Slot::new(d, rng.gen_range(0..=4))
        };
        let heads: Vec<Slot> = (0..n - 1).map(|_| slot(rng)).collect();
        let tail = slot(rng);
        let s = GWSymbol::new(heads, tail);
        if (1..=6).contains(&s.degree()) {
            return s;
        }
    }
}

/// Randomized reduction orders give identical results; basis symbols
/// reduce to the couplings.
pub fn confluence(symbols: usize, trials: usize, seed: u64) -> Result<Report, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let reference = Reducer::default();
    let mut basis_ok = true;
    for i in 0..=4u32 {
        for j in i..=4u32 {
            let v = reference.reduce(&GWSymbol::prime(&[1, j as i64], i as i64))?;
            // a_0_0 is not a generator: <H^1, H^0, H_0> vanishes by the string equation.
            basis_ok &= v == restrict_r_n(&CoefPoly::a(i, j), 4, true);
        }
    }
    checks.push(check("<H^1, H^j, H_i> = a_i_j for 0 <= i <= j <= 4 (a_0_0 = 0)", basis_ok, ""));
    let mut disagreements = Vec::new();
    for _ in 0..symbols {
        let s = random_symbol(&mut rng);
        let base = reference.reduce(&s)?;
        for _ in 0..trials {
            let trial = Reducer::seeded(rng.gen());
            if trial.reduce(&s)? != base {
                disagreements.push(s.to_string());
                break;
            }
        }
    }
    checks.push(check(
        format!("{symbols} random symbols x {trials} random orders"),
        disagreements.is_empty(),
        disagreements.join("; "),
    ));
    Ok(Report::new("confluence", checks))
}
