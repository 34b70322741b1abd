use proptest::prelude::*;

use quantum_dn::exactalg::{rat, CoefPoly, DensePoly};
use quantum_dn::weyl::{OpMatrix, QDOperator, WeylError};

fn coef() -> impl Strategy<Value = CoefPoly> {
    (-3i64..=3, 0u32..=2, 0u32..=2, prop::bool::ANY).prop_map(|(c, i, dj, with_var)| {
        let base = CoefPoly::from_int(c);
        if with_var {
            &base * &CoefPoly::a(i, i + dj)
        } else {
            base
        }
    })
}

fn dense(max_deg: usize) -> impl Strategy<Value = DensePoly> {
    prop::collection::vec(coef(), 0..=max_deg + 1).prop_map(DensePoly::new)
}

fn operator() -> impl Strategy<Value = QDOperator> {
    prop::collection::vec((0u32..=2, dense(2)), 0..=3).prop_map(QDOperator::from_terms)
}

/// `D - A` with `A` upper Hessenberg: entries on and above the diagonal are
/// `c q^k`, the subdiagonal is 1.
fn almost_triangular(size: usize) -> impl Strategy<Value = OpMatrix> {
    prop::collection::vec((coef(), 0u32..=3), size * size).prop_map(move |cells| {
        OpMatrix::from_fn(size, |i, j| {
            if i > j + 1 {
                QDOperator::zero()
            } else if i == j + 1 {
                QDOperator::constant(CoefPoly::from_int(-1))
            } else {
                let (c, k) = &cells[i * size + j];
                let a = QDOperator::q_pow(*k).scale(c);
                if i == j {
                    &QDOperator::d() - &a
                } else {
                    -&a
                }
            }
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(a in operator(), b in operator(), c in operator()) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn composition_distributes(a in operator(), b in operator(), c in operator()) {
        prop_assert_eq!(a.compose(&(&b + &c)), &a.compose(&b) + &a.compose(&c));
    }

    #[test]
    fn hessenberg_recursion_matches_cofactors(m in (1usize..=4).prop_flat_map(almost_triangular)) {
        prop_assert!(m.is_almost_triangular());
        prop_assert_eq!(m.right_determinant_hessenberg(), m.right_determinant_cofactor());
    }

    #[test]
    fn left_division_inverts_multiplication_by_d(l in operator()) {
        let dl = QDOperator::d().compose(&l);
        prop_assert_eq!(dl.left_divide_by_d().unwrap(), l);
    }

    #[test]
    fn successful_left_division_is_exact(l in operator()) {
        if let Ok(q) = l.left_divide_by_d() {
            prop_assert_eq!(QDOperator::d().compose(&q), l);
        }
    }

    #[test]
    fn antitranspose_is_an_involution(m in almost_triangular(3)) {
        let t = m.antitranspose();
        prop_assert!(t.is_almost_triangular());
        prop_assert_eq!(t.antitranspose(), m);
    }

    #[test]
    fn text_and_json_round_trip(l in operator()) {
        prop_assert_eq!(l.to_string().parse::<QDOperator>().unwrap(), l.clone());
        let json = serde_json::to_string(&l).unwrap();
        prop_assert_eq!(serde_json::from_str::<QDOperator>(&json).unwrap(), l);
    }
}

#[test]
fn dq_power_recursion() {
    let dq = QDOperator::dq_power(1);
    for k in 2..=6 {
        assert_eq!(QDOperator::dq_power(k), dq.compose(&QDOperator::dq_power(k - 1)), "k = {k}");
    }
}

#[test]
fn regularized_projective_operator_divides() {
    for n in 1..=4u32 {
        let top = CoefPoly::constant(rat((n as i64 + 1).pow(n + 1), 1));
        let lq = &QDOperator::q_term(0, DensePoly::monomial(CoefPoly::one(), n as usize + 1))
            - &QDOperator::q_pow(n + 1).scale(&top);
        let expect = &QDOperator::q_term(0, DensePoly::monomial(CoefPoly::one(), n as usize))
            - &QDOperator::q_term(n + 1, DensePoly::rising_product(n).scale(&top));
        assert_eq!(lq.regularize().left_divide_by_d().unwrap(), expect);
    }
}

#[test]
fn failed_division_reports_slice() {
    let l: QDOperator = "D^2 + q*D^2".parse().unwrap();
    assert_eq!(l.left_divide_by_d(), Err(WeylError::NotLeftDivisible { q_power: 1, remainder: CoefPoly::one() }));
}

#[test]
fn latex_rendering() {
    let l: QDOperator = "D^2 - a_0_1*q^2*D".parse().unwrap();
    assert_eq!(l.to_latex(), "D^{2} - a_{01}q^{2}D");
}
