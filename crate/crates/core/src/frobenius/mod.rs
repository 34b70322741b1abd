//! Perturbed solutions of `Σ q^i P_i(D)` by the Newton (Frobenius) method,
//! and independent checks of the defining identities.

mod series;

pub use series::{LogSolution, PerturbedSeries};

use thiserror::Error;

use crate::exactalg::{factorial, truncated_exp, CoefPoly, CoefVar, DensePoly, Rational, Truncated};
use crate::weyl::QDOperator;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrobeniusError {
    #[error("the q^0 part {} at D = 0, need order at least {h_max}", match mult {
        Some(m) => format!("vanishes to order {m}"),
        None => "is zero".to_string(),
    })]
    PreconditionFailed { mult: Option<usize>, h_max: usize },
    #[error("P_0(m + h) is not invertible at m = {m}")]
    IndicialNotInvertible { m: usize },
}

/// Newton solution with `c_0 = 1`:
/// `c_M P_0(M + h) = -Σ_{i≥1} P_i(M - i + h) c_{M-i}` in `CoefPoly[h]/(h^h_max)`.
pub fn newton_solve(p: &QDOperator, h_max: usize, q_max: usize) -> Result<PerturbedSeries, FrobeniusError> {
    let p0 = p.slice(0);
    let mult = p0.mult_at_zero();
    if mult.is_none_or(|m| m < h_max) {
        return Err(FrobeniusError::PreconditionFailed { mult, h_max });
    }
    let at = |poly: &DensePoly, x: i64| Truncated::from_dense(&poly.shift_int(x), h_max);
    let mut c = vec![Truncated::one(h_max)];
    for m in 1..=q_max {
        let mut rhs = Truncated::zero(h_max);
        for (i, pi) in p.slices() {
            let i = i as usize;
            if i == 0 || i > m {
                continue;
            }
            rhs = rhs.sub(&at(pi, (m - i) as i64).mul(&c[m - i]));
        }
        let inv = at(&p0, m as i64).inverse().ok_or(FrobeniusError::IndicialNotInvertible { m })?;
        c.push(rhs.mul(&inv));
    }
    Ok(PerturbedSeries::from_slices(h_max, c))
}

/// First place where an identity fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// `q`-order of the failing residual.
    pub q: usize,
    /// Index of the failing identity: `r` for `P I_r = 0`, `s` for the
    /// derivative relations.
    pub index: usize,
    /// Power of `t = log q`, when the identity carries one.
    pub t_power: Option<usize>,
    pub residual: CoefPoly,
}

/// Outcome of a check; `witness` is `None` when everything vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// `P(m + ∂_t)` applied to a polynomial in `t` given by coefficients.
fn apply_shifted(p: &DensePoly, m: i64, v: &[CoefPoly]) -> Vec<CoefPoly> {
    let step = |w: &[CoefPoly]| -> Vec<CoefPoly> {
        (0..w.len())
            .map(|j| {
                let mut x = w[j].scale(&Rational::from_integer(m.into()));
                if j + 1 < w.len() {
                    x += &w[j + 1].scale(&Rational::from_integer(((j + 1) as i64).into()));
                }
                x
            })
            .collect()
    };
    let mut acc = vec![CoefPoly::zero(); v.len()];
    for c in p.coeffs().iter().rev() {
        acc = step(&acc);
        for (a, x) in acc.iter_mut().zip(v) {
            *a += &(x * c);
        }
    }
    acc
}

/// Checks `P I_r = 0` for `r < h_max` through `q^{q_max}`, where
/// `I_r = Σ_j I^{r-j} t^j / j!` and `D` acts on `q^m f(t)` as `q^m (m + ∂_t) f`.
pub fn check_perturbed(p: &QDOperator, series: &PerturbedSeries) -> Verdict {
    let inv_fact: Vec<Rational> = (0..series.h_max()).map(|j| Rational::new(1.into(), factorial(j as u64))).collect();
    // t-coefficients of I_r at q^m
    let i_r =
        |r: usize, m: usize| -> Vec<CoefPoly> { (0..=r).map(|j| series.get(r - j, m).scale(&inv_fact[j])).collect() };
    for m_total in 0..=series.q_max() {
        for r in 0..series.h_max() {
            let mut residual = vec![CoefPoly::zero(); r + 1];
            for (i, pi) in p.slices() {
                let i = i as usize;
                if i > m_total {
                    continue;
                }
                let m = m_total - i;
                let part = apply_shifted(pi, m as i64, &i_r(r, m));
                for (acc, x) in residual.iter_mut().zip(part) {
                    *acc += &x;
                }
            }
            if let Some(j) = residual.iter().position(|c| !c.is_zero()) {
                return Verdict {
                    witness: Some(Witness { q: m_total, index: r, t_power: Some(j), residual: residual[j].clone() }),
                };
            }
        }
    }
    Verdict { witness: None }
}

/// Checks `Σ_{a≤s} P^{(s-a)}(I^a) / (s-a)! = 0` for `s < h_max` through
/// `q^{q_max}`, with `P^{(k)}` the formal `k`-th `D`-derivative.
pub fn appendix_relations_check(p: &QDOperator, series: &PerturbedSeries) -> Verdict {
    let h_max = series.h_max();
    let derivs: Vec<QDOperator> = (0..h_max).map(|k| p.d_derivative(k)).collect();
    for m_total in 0..=series.q_max() {
        for s in 0..h_max {
            let mut residual = CoefPoly::zero();
            for a in 0..=s {
                let k = s - a;
                let scale = Rational::new(1.into(), factorial(k as u64));
                for (i, pk) in derivs[k].slices() {
                    let i = i as usize;
                    if i > m_total {
                        continue;
                    }
                    let m = m_total - i;
                    let term = &pk.eval_int(m as i64) * &series.get(a, m);
                    residual += &term.scale(&scale);
                }
            }
            if !residual.is_zero() {
                return Verdict { witness: Some(Witness { q: m_total, index: s, t_power: None, residual }) };
            }
        }
    }
    Verdict { witness: None }
}

/// Multiplies the `q^m` slice by `(h + 1)…(h + m)`.
pub fn regularize_series(series: &PerturbedSeries) -> PerturbedSeries {
    let h_max = series.h_max();
    let slices = (0..=series.q_max())
        .map(|m| {
            let factor = Truncated::from_dense(&DensePoly::rising_product(m as u32), h_max);
            series.q_slice(m).mul(&factor)
        })
        .collect();
    PerturbedSeries::from_slices(h_max, slices)
}

/// `S_k = Σ_{i≤k} J^{k-i} (log q)^i / i!` for `k < h_max`, where `J^i` are
/// the `h`-components of the given series (pass the regularized series to
/// get the kernel of the operator of type DN).
pub fn log_solutions(series: &PerturbedSeries) -> Vec<LogSolution> {
    (0..series.h_max())
        .map(|k| LogSolution {
            k,
            components: (0..=k)
                .map(|i| {
                    let scale = Rational::new(1.into(), factorial(i as u64));
                    series.h_component(k - i).iter().map(|c| c.scale(&scale)).collect()
                })
                .collect(),
        })
        .collect()
}

/// From a series computed without `a_0_0`: shifts `a_ii ↦ a_ii - a_0_0`
/// for `i ≥ 1` and multiplies by `e^{a_0_0 q}`.
pub fn general_case_shift(series: &PerturbedSeries, q_max: usize) -> PerturbedSeries {
    let a00 = CoefPoly::a(0, 0);
    let shift = |c: &CoefPoly| c.substitute(&|v: CoefVar| (v.i == v.j && v.i >= 1).then(|| &CoefPoly::var(v) - &a00));
    let q_max = q_max.min(series.q_max());
    let exp = truncated_exp(&a00, q_max);
    let h_max = series.h_max();
    let shifted: Vec<Truncated> = (0..=q_max)
        .map(|m| Truncated::from_coeffs(series.q_slice(m).coeffs().iter().map(shift).collect(), h_max))
        .collect();
    let slices = (0..=q_max)
        .map(|m| (0..=m).fold(Truncated::zero(h_max), |acc, k| acc.add(&shifted[m - k].scale(&exp[k]))))
        .collect();
    PerturbedSeries::from_slices(h_max, slices)
}

/// Closed form for projective space `P^N` with `h = (N+1) f`:
/// `Σ_d q^{(N+1)d} / Π_{k≤d} (f + k)^{N+1}`, optionally multiplied slice-wise
/// by `(h + 1)…(h + (N+1)d)`.
pub fn pn_closed_form(n: u32, h_max: usize, q_max: usize, regularized: bool) -> PerturbedSeries {
    let step = (n + 1) as usize;
    let f = |k: usize| {
        Truncated::from_coeffs(
            vec![CoefPoly::from_int(k as i64), CoefPoly::constant(Rational::new(1.into(), (step as i64).into()))],
            h_max,
        )
    };
    let mut slices = vec![Truncated::zero(h_max); q_max + 1];
    let mut current = Truncated::one(h_max);
    let mut d = 0;
    while d * step <= q_max {
        if d > 0 {
            let inv = f(d).inverse().expect("k + f/(N+1) is a unit for k ≥ 1");
            for _ in 0..step {
                current = current.mul(&inv);
            }
        }
        slices[d * step] = if regularized {
            let factor = DensePoly::rising_product((d * step) as u32);
            current.mul(&Truncated::from_dense(&factor, h_max))
        } else {
            current.clone()
        };
        d += 1;
    }
    PerturbedSeries::from_slices(h_max, slices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn op(s: &str) -> QDOperator {
        s.parse().unwrap()
    }

    fn cp(s: &str) -> CoefPoly {
        s.parse().unwrap()
    }

    #[test]
    fn projective_line_closed_form_matches_solver() {
        let lq = op("D^2 - 4*q^2");
        let solved = newton_solve(&lq, 2, 6).unwrap();
        assert_eq!(solved, pn_closed_form(1, 2, 6, false));
        assert!(check_perturbed(&lq, &solved).holds());
        assert!(appendix_relations_check(&lq, &solved).holds());
    }

    #[test]
    fn precondition_and_indicial_errors() {
        assert_eq!(
            newton_solve(&op("D - q"), 2, 3),
            Err(FrobeniusError::PreconditionFailed { mult: Some(1), h_max: 2 })
        );
        assert_eq!(newton_solve(&op("D*(D - 2) + q"), 1, 3), Err(FrobeniusError::IndicialNotInvertible { m: 2 }));
    }

    #[test]
    fn perturbation_is_detected_at_its_order() {
        let lq = op("D^2 - 4*q^2");
        let mut s = newton_solve(&lq, 2, 6).unwrap();
        s.set(0, 4, &s.get(0, 4) + &CoefPoly::one());
        let v = check_perturbed(&lq, &s);
        assert_eq!(v.witness.as_ref().map(|w| (w.q, w.index)), Some((4, 0)));
        let w = appendix_relations_check(&lq, &s);
        assert_eq!(w.witness.map(|w| w.q), Some(4));
    }

    #[test]
    fn regularize_single_term() {
        let mut s = PerturbedSeries::zero(2, 1);
        s.set(0, 1, CoefPoly::a(1, 1));
        let r = regularize_series(&s);
        assert_eq!(r.get(0, 1), CoefPoly::a(1, 1));
        assert_eq!(r.get(1, 1), CoefPoly::a(1, 1));
        assert!(r.get(0, 0).is_zero());
    }

    #[test]
    fn log_solutions_of_d_squared() {
        let sol = newton_solve(&op("D^2"), 2, 3).unwrap();
        let logs = log_solutions(&sol);
        assert_eq!(logs.len(), 2);
        assert_eq!(logs[0].components, vec![sol.h_component(0)]);
        assert_eq!(logs[1].components[1][0], CoefPoly::one());
        assert!(logs[1].components[0].iter().all(CoefPoly::is_zero));
    }

    #[test]
    fn shift_with_zero_a00_is_identity() {
        let mut s = PerturbedSeries::zero(1, 2);
        s.set(0, 0, CoefPoly::one());
        s.set(0, 2, cp("1/4*a_1_1^2"));
        let shifted = general_case_shift(&s, 2);
        assert_eq!(shifted.get(0, 1), CoefPoly::a(0, 0));
        let back = crate::dnbuild::restrict_r_n(&shifted, 5, true);
        assert_eq!(back, s);
        assert_eq!(shifted.get(0, 2), cp("1/4*a_1_1^2 - 1/2*a_0_0*a_1_1 + 3/4*a_0_0^2"));
    }

    #[test]
    fn series_formats_round_trip() {
        let s = pn_closed_form(1, 2, 4, true);
        let text = s.to_string();
        assert_eq!(text.parse::<PerturbedSeries>().unwrap(), s);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<PerturbedSeries>(&json).unwrap(), s);
        assert_eq!(s.get(0, 2), CoefPoly::constant(rat(2, 1)));
    }
}
