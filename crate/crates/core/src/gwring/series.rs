use std::collections::BTreeMap;

use super::{GWSymbol, GwError, Reducer, Slot};
use crate::dnbuild::{connection_matrix, restrict_r_n, DNConfig};
use crate::exactalg::{factorial, CoefPoly, Rational, Truncated};
use crate::frobenius::{regularize_series, PerturbedSeries};
use crate::weyl::OpMatrix;

/// The universal series `I = 1 + Σ_{d≥1} Σ_j ⟨τ_{d+j-2} H_j⟩ q^d h^j` and
/// its regularization `Ĩ`.
pub fn universal_i(
    reducer: &Reducer,
    q_max: usize,
    h_max: usize,
) -> Result<(PerturbedSeries, PerturbedSeries), GwError> {
    let mut slices = vec![Truncated::one(h_max)];
    for d in 1..=q_max {
        let mut coeffs = Vec::with_capacity(h_max);
        for j in 0..h_max {
            let index = (d + j) as i64 - 2;
            let s = GWSymbol::new(vec![], Slot::new(index, j as i64));
            coeffs.push(reducer.reduce(&s)?);
        }
        slices.push(Truncated::from_coeffs(coeffs, h_max));
    }
    let i = PerturbedSeries::from_slices(h_max, slices);
    let tilde = regularize_series(&i);
    Ok((i, tilde))
}

/// Entry of `Φ` as a polynomial in `q` and `t`, keyed by `(q power, t power)`.
pub type QtPoly = BTreeMap<(usize, usize), CoefPoly>;

/// `Φ_ab = Σ_d q^d Σ_{k ≤ N-b} t^k/k! V_{d,k}` through `q^{q_max}` with
/// `V = ⟨τ_{d+a-b-k-1} H^{b+k}, H_a⟩` for `d ≥ 1` and
/// `V = ⟨H^0, τ_{a-b-k} H^{b+k}, H_a⟩` for `d = 0`, restricted to size `N`.
pub fn phi_matrix(reducer: &Reducer, n: u32, q_max: usize) -> Result<Vec<Vec<QtPoly>>, GwError> {
    let size = n as usize + 1;
    let mut phi = vec![vec![QtPoly::new(); size]; size];
    for (a, row) in phi.iter_mut().enumerate() {
        for (b, entry) in row.iter_mut().enumerate() {
            for d in 0..=q_max {
                for k in 0..size - b {
                    let (a_, b_, k_, d_) = (a as i64, b as i64, k as i64, d as i64);
                    let s = if d == 0 {
                        GWSymbol::new(vec![Slot::new(0, 0), Slot::new(a_ - b_ - k_, b_ + k_)], Slot::new(0, a_))
                    } else {
                        GWSymbol::new(vec![Slot::new(d_ + a_ - b_ - k_ - 1, b_ + k_)], Slot::new(0, a_))
                    };
                    let v = restrict_r_n(&reducer.reduce(&s)?, n, true);
                    if !v.is_zero() {
                        let scale = Rational::new(1.into(), factorial(k as u64));
                        entry.insert((d, k), v.scale(&scale));
                    }
                }
            }
        }
    }
    Ok(phi)
}

/// Where `q ∂_q Φ + ∂_t Φ = A Φ` first fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessWitness {
    pub row: usize,
    pub col: usize,
    pub q: usize,
    pub t: usize,
    pub residual: CoefPoly,
}

/// Checks flatness of `Φ` for the geometric abstract connection.
pub fn phi_flatness(reducer: &Reducer, n: u32, q_max: usize) -> Result<Option<FlatnessWitness>, GwError> {
    phi_flatness_against(reducer, n, q_max, &connection_matrix(&DNConfig::geometric(n)))
}

/// Checks `q ∂_q Φ + ∂_t Φ = A Φ` through `q^{q_max}` for a connection
/// matrix `A` whose entries are polynomials in `q` (no `D`).
pub fn phi_flatness_against(
    reducer: &Reducer,
    n: u32,
    q_max: usize,
    connection: &OpMatrix,
) -> Result<Option<FlatnessWitness>, GwError> {
    let size = n as usize + 1;
    let phi = phi_matrix(reducer, n, q_max)?;
    let get = |e: &QtPoly, d: usize, k: usize| e.get(&(d, k)).cloned().unwrap_or_default();
    for row in 0..size {
        for col in 0..size {
            for d in 0..=q_max {
                for k in 0..=size {
                    let entry = &phi[row][col];
                    let mut residual = &get(entry, d, k).scale(&Rational::from_integer(d.into()))
                        + &get(entry, d, k + 1).scale(&Rational::from_integer((k + 1).into()));
                    for (c, phi_row) in phi.iter().enumerate() {
                        for (e, slice) in connection.get(row, c).slices() {
                            let e = e as usize;
                            if e <= d {
                                residual -= &(&slice.coeff(0) * &get(&phi_row[col], d - e, k));
                            }
                        }
                    }
                    if !residual.is_zero() {
                        return Ok(Some(FlatnessWitness { row, col, q: d, t: k, residual }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// True when `Φ` at `q = t = 0` is the identity matrix.
pub fn phi_constant_term_is_identity(phi: &[Vec<QtPoly>]) -> bool {
    phi.iter().enumerate().all(|(a, row)| {
        row.iter().enumerate().all(|(b, e)| {
            let c = e.get(&(0, 0)).cloned().unwrap_or_default();
            if a == b {
                c.is_one()
            } else {
                c.is_zero()
            }
        })
    })
}
