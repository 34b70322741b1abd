//! The abstract quantum connection, its quantum differential operator and
//! the operator of type DN built from it, plus coefficient substitutions
//! (restriction, specialization, symmetrization).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exactalg::{parse_rational, CoefMap, CoefPoly, CoefVar, Rational};
use crate::weyl::{OpMatrix, QDOperator, WeylError};

/// Which operator to build and how.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct DNConfig {
    pub n: u32,
    /// When false, `a_0_0` is set to zero (the geometric case).
    pub include_a00: bool,
    pub symmetrize: bool,
}

impl Default for DNConfig {
    fn default() -> Self {
        DNConfig { n: 1, include_a00: true, symmetrize: false }
    }
}

impl DNConfig {
    pub fn new(n: u32) -> Self {
        DNConfig { n, ..DNConfig::default() }
    }

    pub fn geometric(n: u32) -> Self {
        DNConfig { n, include_a00: false, symmetrize: false }
    }

    fn coupling(&self, i: u32, j: u32) -> CoefPoly {
        if i == 0 && j == 0 && !self.include_a00 {
            CoefPoly::zero()
        } else {
            CoefPoly::a(i, j)
        }
    }

    fn finish<T: CoefMap>(&self, x: T) -> T {
        if self.symmetrize {
            symmetrize_dn(&x, self.n)
        } else {
            x
        }
    }
}

/// `A^N`: `a_ij q^{j-i+1}` on and above the diagonal, `1` on the subdiagonal.
pub fn connection_matrix(cfg: &DNConfig) -> OpMatrix {
    let size = cfg.n as usize + 1;
    let m = OpMatrix::from_fn(size, |i, j| {
        if i <= j {
            QDOperator::q_pow((j - i + 1) as u32).scale(&cfg.coupling(i as u32, j as u32))
        } else if i == j + 1 {
            QDOperator::one()
        } else {
            QDOperator::zero()
        }
    });
    cfg.finish(m)
}

fn d_minus(m: &OpMatrix) -> OpMatrix {
    OpMatrix::from_fn(m.size(), |i, j| {
        let neg = -m.get(i, j);
        if i == j {
            &QDOperator::d() + &neg
        } else {
            neg
        }
    })
}

/// `L^Q_N = det_right(D - A^N)`.
pub fn quantum_operator(cfg: &DNConfig) -> QDOperator {
    d_minus(&connection_matrix(cfg)).right_determinant()
}

/// The matrix with `a_ij (Dq)^{j-i+1}` on and above the diagonal and `1`
/// on the subdiagonal.
pub fn dq_matrix(cfg: &DNConfig) -> OpMatrix {
    let size = cfg.n as usize + 1;
    let m = OpMatrix::from_fn(size, |i, j| {
        if i <= j {
            QDOperator::dq_power((j - i + 1) as u32).scale(&cfg.coupling(i as u32, j as u32))
        } else if i == j + 1 {
            QDOperator::one()
        } else {
            QDOperator::zero()
        }
    });
    cfg.finish(m)
}

/// `L_N` with `D L_N = det_right(D - M)`, `M` the [`dq_matrix`].
pub fn dn_operator(cfg: &DNConfig) -> Result<QDOperator, WeylError> {
    d_minus(&dq_matrix(cfg)).right_determinant().left_divide_by_d()
}

/// `L_N` obtained by regularizing `L^Q_N` and dividing by `D` on the left.
pub fn dn_operator_via_regularization(cfg: &DNConfig) -> Result<QDOperator, WeylError> {
    quantum_operator(cfg).regularize().left_divide_by_d()
}

/// Sets every `a_ij` with an index above `n_target` to zero, and `a_0_0`
/// too when `geometric`.
pub fn restrict_r_n<T: CoefMap>(x: &T, n_target: u32, geometric: bool) -> T {
    let f = move |c: &CoefPoly| {
        c.substitute(&|v: CoefVar| {
            let killed = v.i > n_target || v.j > n_target || (geometric && v.i == 0 && v.j == 0);
            killed.then(CoefPoly::zero)
        })
    };
    x.map_coefs(&f)
}

/// Identifies `a_ij` with `a_{N-j,N-i}`, keeping the lexicographically
/// smaller index pair.
pub fn symmetrize_dn<T: CoefMap>(x: &T, n: u32) -> T {
    let f = move |c: &CoefPoly| {
        c.substitute(&|v: CoefVar| {
            if v.j > n {
                return None;
            }
            let (pi, pj) = (n - v.j, n - v.i);
            ((pi, pj) < (v.i, v.j)).then(|| CoefPoly::a(pi, pj))
        })
    };
    x.map_coefs(&f)
}

/// Rational values for some of the couplings; the rest stay symbolic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Specialization {
    pub assignment: BTreeMap<CoefVar, Rational>,
}

impl Specialization {
    pub fn new() -> Self {
        Specialization::default()
    }

    pub fn with(mut self, i: u32, j: u32, value: Rational) -> Self {
        let v = CoefVar::new(i, j).expect("i <= j");
        self.assignment.insert(v, value);
        self
    }

    /// Projective space `P^N`: `a_0_N = (N+1)^{N+1}`, every other coupling zero.
    pub fn projective_space(n: u32) -> Self {
        let mut s = Specialization::new();
        for i in 0..=n {
            for j in i..=n {
                s = s.with(i, j, Rational::from_integer(0.into()));
            }
        }
        let top = num_bigint::BigInt::from(n + 1).pow(n + 1);
        s.with(0, n, Rational::from_integer(top))
    }

    pub fn apply<T: CoefMap>(&self, x: &T) -> T {
        let f = |c: &CoefPoly| c.evaluate_partial(&self.assignment);
        x.map_coefs(&f)
    }
}

pub fn specialize<T: CoefMap>(x: &T, s: &Specialization) -> T {
    s.apply(x)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RationalJson {
    Text(String),
    Int(i64),
}

#[derive(Serialize, Deserialize)]
struct SpecializationJson {
    assign: BTreeMap<String, RationalJson>,
}

impl Serialize for Specialization {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SpecializationJson {
            assign: self.assignment.iter().map(|(v, r)| (v.to_string(), RationalJson::Text(r.to_string()))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Specialization {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let json = SpecializationJson::deserialize(d)?;
        let mut assignment = BTreeMap::new();
        for (name, value) in json.assign {
            let v = CoefVar::parse(&name).ok_or_else(|| D::Error::custom(format!("not a coupling: {name:?}")))?;
            let r = match value {
                RationalJson::Int(n) => Rational::from_integer(n.into()),
                RationalJson::Text(s) => parse_rational(&s).map_err(D::Error::custom)?,
            };
            assignment.insert(v, r);
        }
        Ok(Specialization { assignment })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(s: &str) -> QDOperator {
        s.parse().unwrap()
    }

    #[test]
    fn connection_matrix_entries() {
        let m = connection_matrix(&DNConfig::new(1));
        assert_eq!(m.get(0, 0), &op("a_0_0*q"));
        assert_eq!(m.get(0, 1), &op("a_0_1*q^2"));
        assert_eq!(m.get(1, 0), &op("1"));
        assert_eq!(m.get(1, 1), &op("a_1_1*q"));
        assert_eq!(connection_matrix(&DNConfig::new(2)).get(0, 2), &op("a_0_2*q^3"));
        assert!(connection_matrix(&DNConfig::geometric(2)).get(0, 0).is_zero());
    }

    #[test]
    fn quantum_operator_n1() {
        let expect = op("D^2 - q*(a_0_0*(D+1) + a_1_1*D) + q^2*(a_0_0*a_1_1 - a_0_1)");
        assert_eq!(quantum_operator(&DNConfig::new(1)), expect);
    }

    #[test]
    fn dn_operator_n1() {
        let expect = op("D - q*(a_0_0*(D+1) + a_1_1*D) + q^2*(a_0_0*a_1_1 - a_0_1)*(D+1)");
        let cfg = DNConfig::new(1);
        assert_eq!(dn_operator(&cfg).unwrap(), expect);
        assert_eq!(dn_operator_via_regularization(&cfg).unwrap(), expect);
    }

    #[test]
    fn projective_plane() {
        let s = Specialization::projective_space(2);
        let lq = specialize(&quantum_operator(&DNConfig::new(2)), &s);
        assert_eq!(lq.to_string(), "D^3 - 27*q^3");
        let l = specialize(&dn_operator(&DNConfig::new(2)).unwrap(), &s);
        assert_eq!(l, op("D^2 - 27*q^3*(D+1)*(D+2)"));
    }

    #[test]
    fn restriction() {
        let c: CoefPoly = "a_0_1*a_3_3 + a_1_2".parse().unwrap();
        assert_eq!(restrict_r_n(&c, 2, false).to_string(), "a_1_2");
        assert_eq!(restrict_r_n(&c, 3, false), c);
        let g: CoefPoly = "a_0_0 + a_0_1".parse().unwrap();
        assert_eq!(restrict_r_n(&g, 3, true).to_string(), "a_0_1");
    }

    #[test]
    fn symmetrization() {
        let c: CoefPoly = "a_1_2 + a_1_1 + a_0_1".parse().unwrap();
        let s = symmetrize_dn(&c, 2);
        assert_eq!(s, "2*a_0_1 + a_1_1".parse().unwrap());
        assert_eq!(symmetrize_dn(&s, 2), s);
    }

    #[test]
    fn specialization_json() {
        let s: Specialization = serde_json::from_str(r#"{"assign": {"a_0_2": "27", "a_1_1": 0}}"#).unwrap();
        assert_eq!(
            s,
            Specialization::new().with(0, 2, Rational::from_integer(27.into())).with(
                1,
                1,
                Rational::from_integer(0.into())
            )
        );
        let one: CoefPoly = "1 - a_0_0".parse().unwrap();
        let s = Specialization::new().with(0, 0, Rational::from_integer(1.into()));
        assert!(specialize(&one, &s).is_zero());
        assert_eq!(specialize(&one, &Specialization::new()), one);
    }
}
