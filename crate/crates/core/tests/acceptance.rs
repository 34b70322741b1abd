//! Acceptance criteria, one line each. Exact equality throughout.

use std::path::Path;
use std::process::ExitCode;

use quantum_dn::dnbuild::{dn_operator, quantum_operator, restrict_r_n, specialize, DNConfig, Specialization};
use quantum_dn::exactalg::{factorial, CoefPoly, DensePoly, Rational};
use quantum_dn::frobenius::{
    appendix_relations_check, check_perturbed, general_case_shift, newton_solve, pn_closed_form, regularize_series,
    PerturbedSeries,
};
use quantum_dn::gwring::{universal_i, Reducer};
use quantum_dn::verify::{self, analytic_solution, operator_family};
use quantum_dn::weyl::QDOperator;
use quantum_dn::Error;

const SEED: u64 = 7_331;

fn golden(name: &str) -> PerturbedSeries {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .parse()
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

type Outcome = Result<Vec<String>, Error>;
type Criterion = (&'static str, fn() -> Outcome);

fn expect(problems: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        problems.push(what());
    }
}

fn l2_golden() -> Outcome {
    let mut p = Vec::new();
    let got = analytic_solution(2, 4)?;
    let want = golden("l2_analytic.txt");
    for m in 0..=4 {
        expect(&mut p, got.get(0, m) == want.get(0, m), || format!("q^{m}: got {}", got.get(0, m)));
    }
    Ok(p)
}

fn l3_golden() -> Outcome {
    let mut p = Vec::new();
    let l3 = analytic_solution(3, 4)?;
    let want = golden("l3_analytic.txt");
    for m in 0..=4 {
        expect(&mut p, l3.get(0, m) == want.get(0, m), || format!("q^{m}: got {}", l3.get(0, m)));
    }
    let restricted = restrict_r_n(&l3, 2, false);
    expect(&mut p, restricted == golden("l2_analytic.txt"), || "a_i3 = 0 does not give the L_2 solution".into());
    Ok(p)
}

fn universality() -> Outcome {
    let a = analytic_solution(5, 3)?;
    let b = analytic_solution(7, 3)?;
    Ok((0..4).filter(|&m| a.get(0, m) != b.get(0, m)).map(|m| format!("L_5 and L_7 differ at q^{m}")).collect())
}

fn projective_spaces() -> Outcome {
    let mut p = Vec::new();
    for n in 2..=4u32 {
        let top = CoefPoly::constant(Rational::from_integer(num_bigint::BigInt::from(n + 1).pow(n + 1)));
        let q_top = QDOperator::q_pow(n + 1).scale(&top);
        let d = |k: u32| QDOperator::q_term(0, DensePoly::monomial(CoefPoly::one(), k as usize));
        let spec = Specialization::projective_space(n);
        let lq = specialize(&quantum_operator(&DNConfig::new(n)), &spec);
        let l = specialize(&dn_operator(&DNConfig::new(n))?, &spec);
        expect(&mut p, lq == &d(n + 1) - &q_top, || format!("N={n}: quantum operator {lq}"));
        let rising = QDOperator::q_term(0, DensePoly::rising_product(n));
        expect(&mut p, l == &d(n) - &q_top.compose(&rising), || format!("N={n}: DN operator {l}"));

        let h = n as usize + 1;
        let q_max = 2 * h;
        let i = pn_closed_form(n, h, q_max, false);
        let it = pn_closed_form(n, h, q_max, true);
        expect(&mut p, check_perturbed(&lq, &i).holds(), || format!("N={n}: I fails for L^Q"));
        expect(&mut p, check_perturbed(&lq.regularize(), &it).holds(), || {
            format!("N={n}: Ĩ fails for regularized L^Q")
        });
        expect(&mut p, check_perturbed(&l, &it.truncate(h - 1, q_max)).holds(), || {
            format!("N={n}: Ĩ mod h^N fails for L")
        });
        expect(&mut p, check_perturbed(&l, &newton_solve(&l, h - 1, q_max)?).holds(), || format!("N={n}: L solution"));

        let analytic = newton_solve(&l, 1, q_max)?;
        let fact = CoefPoly::constant(Rational::from_integer(factorial(u64::from(n) + 1)));
        expect(&mut p, analytic.get(0, h) == fact, || format!("N={n}: q^(N+1) coefficient {}", analytic.get(0, h)));
    }
    Ok(p)
}

fn itilde_golden() -> Outcome {
    let mut p = Vec::new();
    let (_, tilde) = universal_i(&Reducer::default(), 2, 3)?;
    let want = golden("itilde.txt");
    for m in 0..=2 {
        for j in 0..3 {
            if m == 0 && j == 0 {
                continue;
            }
            expect(&mut p, tilde.get(j, m) == want.get(j, m), || format!("q^{m} h^{j}: got {}", tilde.get(j, m)));
        }
    }
    Ok(p)
}

fn path_equality() -> Outcome {
    let report = verify::paths(3)?;
    Ok(report.checks.into_iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.label, c.detail)).collect())
}

fn solver_equivalence() -> Outcome {
    let mut p = Vec::new();
    let mut cases: Vec<(String, QDOperator, PerturbedSeries)> = vec![
        ("L_2 golden".into(), dn_operator(&DNConfig::new(2))?, golden("l2_analytic.txt")),
        ("L_3 golden".into(), dn_operator(&DNConfig::new(3))?, golden("l3_analytic.txt")),
        (
            "Ĩ golden, mod h^2, N=2".into(),
            dn_operator(&DNConfig::geometric(2))?,
            restrict_r_n(&golden("itilde.txt"), 2, true).truncate(2, 2),
        ),
    ];
    for n in 1..=2u32 {
        let spec = Specialization::projective_space(n);
        let lq = specialize(&quantum_operator(&DNConfig::new(n)), &spec);
        cases.push((format!("P^{n} closed form"), lq, pn_closed_form(n, n as usize + 1, 6, false)));
    }
    for (name, op, series) in &cases {
        let a = check_perturbed(op, series);
        let b = appendix_relations_check(op, series);
        expect(&mut p, a.holds() && b.holds(), || format!("{name}: definition {a:?}, relations {b:?}"));
    }
    let fuzz = verify::appendix(50, SEED)?;
    p.extend(fuzz.checks.into_iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.label, c.detail)));
    Ok(p)
}

fn hyperplane_principle() -> Outcome {
    let mut p = Vec::new();
    for f in operator_family(3)? {
        let lhs = regularize_series(&newton_solve(&f.op, f.h_max, 6)?);
        let rhs = newton_solve(&f.op.regularize(), f.h_max, 6)?;
        expect(&mut p, lhs == rhs, || format!("{} differs", f.name));
    }
    Ok(p)
}

fn flatness() -> Outcome {
    let report = verify::flatness(2, 2)?;
    Ok(report.checks.into_iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.label, c.detail)).collect())
}

fn confluence() -> Outcome {
    let report = verify::confluence(100, 100, SEED)?;
    Ok(report.checks.into_iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.label, c.detail)).collect())
}

fn general_case() -> Outcome {
    let (i, _) = universal_i(&Reducer::default(), 4, 1)?;
    let shifted = regularize_series(&general_case_shift(&restrict_r_n(&i, 2, true), 4));
    let want = golden("l2_analytic.txt");
    Ok((0..=4)
        .filter(|&m| shifted.get(0, m) != want.get(0, m))
        .map(|m| format!("q^{m}: got {}", shifted.get(0, m)))
        .collect())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("analytic solution of L_2 through q^4", l2_golden),
        ("analytic solution of L_3 through q^4 and restriction to L_2", l3_golden),
        ("L_5 and L_7 solutions agree mod q^4", universality),
        ("projective spaces N=2,3,4", projective_spaces),
        ("universal Ĩ through q^2 h^2", itilde_golden),
        ("two constructions of L_N agree, N=1,2,3", path_equality),
        ("derivative relations agree with the definition", solver_equivalence),
        ("regularization commutes with solving, N<=3, q^6", hyperplane_principle),
        ("fundamental solution is flat, N=2, q^2", flatness),
        ("reduction is confluent; basis identities", confluence),
        ("a_0_0 shift of the universal solution gives L_2's", general_case),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let problems = match run() {
            Ok(p) => p,
            Err(e) => vec![format!("error: {e}")],
        };
        if problems.is_empty() {
            println!("[PASS] criterion {}: {name}", k + 1);
        } else {
            failed += 1;
            println!("[FAIL] criterion {}: {name}", k + 1);
            for line in problems {
                println!("       {line}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
