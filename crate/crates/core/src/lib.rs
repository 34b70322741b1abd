//! Exact symbolic computation for quantum differential operators of
//! quantum minimal Fano varieties and the abstract genus-zero
//! Gromov–Witten ring.
//!
//! * [`exactalg`]: rationals and polynomials in the couplings `a_ij`.
//! * [`weyl`]: operators `Σ q^i P_i(D)` with `D q = q (D + 1)`.
//! * [`dnbuild`]: the connection matrix, the quantum operator, operators of type DN.
//! * [`frobenius`]: Newton/Frobenius solutions and perturbed-solution checks.
//! * [`gwring`]: symbols, relations GW1–GW6 and the reduction engine.
//! * [`verify`]: named consistency suites shared by the command-line tool.

pub mod dnbuild;
pub mod exactalg;
pub mod frobenius;
pub mod gwring;
pub mod verify;
pub mod weyl;

use thiserror::Error;

/// Any failure raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] exactalg::ParseError),
    #[error(transparent)]
    Weyl(#[from] weyl::WeylError),
    #[error(transparent)]
    Frobenius(#[from] frobenius::FrobeniusError),
    #[error(transparent)]
    Gw(#[from] gwring::GwError),
}
