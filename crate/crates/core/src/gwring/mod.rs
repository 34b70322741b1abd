//! The abstract genus-zero Gromov–Witten ring: symbols, the relations
//! between them, and a terminating reduction to polynomials in `a_ij`.

mod reduce;
mod relations;
mod series;
mod symbol;

pub use reduce::{measure, FirstChoice, ReduceCache, Reducer, SeededChoice, Strategy};
pub use relations::{
    gw2_normalize, gw3_string, gw4_lift, gw5_options, gw5_strip, gw6_options, gw6_shuffle, Expansion, Gw5Choice,
    Product,
};
pub use series::{
    phi_constant_term_is_identity, phi_flatness, phi_flatness_against, phi_matrix, universal_i, FlatnessWitness, QtPoly,
};
pub use symbol::{GWSymbol, Slot};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GwError {
    #[error("symbol has degree {degree}, expected 0")]
    DegreeNonzero { degree: i64 },
    #[error("relation does not apply: {0}")]
    PreconditionFailed(String),
    #[error("reduction of {from} recursed into {to} without decreasing the measure")]
    MeasureNotDecreasing { from: String, to: String },
    #[error("{0}")]
    Parse(String),
}
