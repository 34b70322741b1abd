//! Exact arithmetic: rationals, sparse polynomials in the couplings `a_ij`,
//! univariate polynomials over them, and the truncated ring `R[ε]/(ε^K)`.

mod dense;
mod parse;
mod poly;
mod trunc;

pub use dense::{truncated_exp, DensePoly};
pub use parse::{parse_expr, parse_rational, ExprRing, ParseError};
pub use poly::{CoefPoly, CoefVar, Monomial};
pub use trunc::Truncated;

use num_bigint::BigInt;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

/// Types whose coefficients live in [`CoefPoly`] and can be rewritten
/// coefficient-wise (specialization, restriction, symmetrization).
pub trait CoefMap: Sized {
    fn map_coefs(&self, f: &dyn Fn(&CoefPoly) -> CoefPoly) -> Self;
}

impl CoefMap for CoefPoly {
    fn map_coefs(&self, f: &dyn Fn(&CoefPoly) -> CoefPoly) -> Self {
        f(self)
    }
}

impl CoefMap for DensePoly {
    fn map_coefs(&self, f: &dyn Fn(&CoefPoly) -> CoefPoly) -> Self {
        self.map_coeffs(f)
    }
}

impl CoefMap for Vec<CoefPoly> {
    fn map_coefs(&self, f: &dyn Fn(&CoefPoly) -> CoefPoly) -> Self {
        self.iter().map(f).collect()
    }
}

impl serde::Serialize for CoefPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for CoefPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
