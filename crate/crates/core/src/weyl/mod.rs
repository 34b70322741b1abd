//! The ring generated by `q` and `D = q d/dq`, matrices over it and right
//! determinants.

mod matrix;
mod operator;

pub use matrix::OpMatrix;
pub use operator::QDOperator;

use thiserror::Error;

use crate::exactalg::CoefPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("matrix is not square: {rows} rows but a row of length {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("operator is not left divisible by D: slice q^{q_power} leaves remainder {remainder}")]
    NotLeftDivisible { q_power: u32, remainder: CoefPoly },
}
