use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::WeylError;
use crate::exactalg::{CoefMap, CoefPoly, CoefVar, DensePoly, ExprRing, ParseError, Rational};

/// Operator `Σ_i q^i P_i(D)` in normal form, with `D q = q (D + 1)`.
///
/// Coefficients of the `P_i` are polynomials in the couplings and commute
/// with both `q` and `D`. No zero `P_i` is stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QDOperator {
    terms: BTreeMap<u32, DensePoly>,
}

impl QDOperator {
    pub fn zero() -> Self {
        QDOperator::default()
    }

    pub fn one() -> Self {
        QDOperator::constant(CoefPoly::one())
    }

    pub fn constant(c: CoefPoly) -> Self {
        QDOperator::from_terms([(0, DensePoly::constant(c))])
    }

    /// `D`
    pub fn d() -> Self {
        QDOperator::from_terms([(0, DensePoly::x())])
    }

    /// `q^k`
    pub fn q_pow(k: u32) -> Self {
        QDOperator::from_terms([(k, DensePoly::one())])
    }

    /// `q^k P(D)`
    pub fn q_term(k: u32, p: DensePoly) -> Self {
        QDOperator::from_terms([(k, p)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, DensePoly)>) -> Self {
        let mut out = QDOperator::zero();
        for (k, p) in terms {
            out.add_slice(k, &p);
        }
        out
    }

    fn add_slice(&mut self, k: u32, p: &DensePoly) {
        if p.is_zero() {
            return;
        }
        let sum = match self.terms.get(&k) {
            Some(existing) => existing + p,
            None => p.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `P_k`, zero when absent.
    pub fn slice(&self, k: u32) -> DensePoly {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn slices(&self) -> impl Iterator<Item = (u32, &DensePoly)> {
        self.terms.iter().map(|(&k, p)| (k, p))
    }

    pub fn q_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn d_degree(&self) -> Option<usize> {
        self.terms.values().filter_map(DensePoly::degree).max()
    }

    pub fn scale(&self, c: &CoefPoly) -> QDOperator {
        QDOperator::from_terms(self.terms.iter().map(|(&k, p)| (k, p.scale(c))))
    }

    /// Normal form of `self ∘ other`, using `P(D) q^j = q^j P(D + j)`.
    pub fn compose(&self, other: &QDOperator) -> QDOperator {
        let mut out = QDOperator::zero();
        for (&i, p) in &self.terms {
            let mut shifted: BTreeMap<u32, DensePoly> = BTreeMap::new();
            for (&j, r) in &other.terms {
                let ps = shifted.entry(j).or_insert_with(|| p.shift_int(j as i64));
                out.add_slice(i + j, &(&*ps * r));
            }
        }
        out
    }

    /// `(D q)^k = q^k (D + 1)(D + 2)…(D + k)`.
    pub fn dq_power(k: u32) -> QDOperator {
        QDOperator::q_term(k, DensePoly::rising_product(k))
    }

    /// `q^i P_i(D) ↦ q^i P_i(D) (D + 1)…(D + i)`.
    pub fn regularize(&self) -> QDOperator {
        QDOperator::from_terms(self.terms.iter().map(|(&k, p)| (k, p * &DensePoly::rising_product(k))))
    }

    /// The operator `L` with `D ∘ L = self`.
    ///
    /// `D q^i Q(D) = q^i (D + i) Q(D)`, so each slice must vanish at `D = -i`.
    pub fn left_divide_by_d(&self) -> Result<QDOperator, WeylError> {
        let mut out = QDOperator::zero();
        for (&k, p) in &self.terms {
            let (quotient, remainder) = p.div_rem_linear(&CoefPoly::from_int(k as i64));
            if !remainder.is_zero() {
                return Err(WeylError::NotLeftDivisible { q_power: k, remainder });
            }
            out.add_slice(k, &quotient);
        }
        Ok(out)
    }

    /// Formal `r`-th derivative with respect to `D`, slice by slice.
    pub fn d_derivative(&self, r: usize) -> QDOperator {
        QDOperator::from_terms(self.terms.iter().map(|(&k, p)| (k, p.nth_derivative(r))))
    }

    /// Every coefficient of `q^m D^k` has weighted degree `m`.
    pub fn is_weighted_homogeneous(&self) -> bool {
        self.terms.iter().all(|(&m, p)| p.coeffs().iter().all(|c| c.is_weighted_homogeneous(m as i64)))
    }

    pub fn to_latex(&self) -> String {
        self.render_with(|c| c.to_latex(), |c| c.to_latex(), "q", "D", "", true)
    }

    fn render_with(
        &self,
        full: impl Fn(&CoefPoly) -> String,
        plain: impl Fn(&CoefPoly) -> String,
        q: &str,
        d: &str,
        star: &str,
        braces: bool,
    ) -> String {
        let pow = |x: &str, k: usize| match k {
            0 => String::new(),
            1 => x.to_string(),
            _ if braces => format!("{x}^{{{k}}}"),
            _ => format!("{x}^{k}"),
        };
        let mut out = String::new();
        for (&m, p) in &self.terms {
            for (k, c) in p.coeffs().iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let qd: Vec<String> = [pow(q, m as usize), pow(d, k)].into_iter().filter(|s| !s.is_empty()).collect();
                let qd = qd.join(star);
                let (neg, body) = match c.len() {
                    1 => {
                        let (mono, coef) = c.terms().next().expect("one term");
                        let neg = coef.is_negative();
                        let abs = CoefPoly::term(coef.abs(), mono.clone());
                        let text = plain(&abs);
                        if qd.is_empty() {
                            (neg, text)
                        } else if abs.is_one() {
                            (neg, qd)
                        } else {
                            (neg, format!("{text}{star}{qd}"))
                        }
                    }
                    _ => {
                        let leading_negative = c.terms().next_back().is_some_and(|(_, v)| v.is_negative());
                        let inner = if leading_negative { -c } else { c.clone() };
                        let text = format!("({})", full(&inner));
                        if qd.is_empty() {
                            (leading_negative, text)
                        } else {
                            (leading_negative, format!("{text}{star}{qd}"))
                        }
                    }
                };
                if out.is_empty() {
                    if neg {
                        out.push('-');
                    }
                } else {
                    out.push_str(if neg { " - " } else { " + " });
                }
                out.push_str(&body);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for QDOperator {
    /// Canonical text: terms ordered by ascending `q` power, then descending
    /// `D` power, each as `coef*q^i*D^k`, e.g. `D^3 - 27*q^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.render_with(|c| c.to_string(), |c| c.to_string(), "q", "D", "*", false);
        write!(f, "{s}")
    }
}

impl ExprRing for QDOperator {
    fn from_rational(r: Rational) -> Self {
        QDOperator::constant(CoefPoly::constant(r))
    }
    fn from_coef_var(v: CoefVar) -> Self {
        QDOperator::constant(CoefPoly::var(v))
    }
    fn from_symbol(name: &str) -> Option<Self> {
        match name {
            "q" => Some(QDOperator::q_pow(1)),
            "D" => Some(QDOperator::d()),
            _ => None,
        }
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.compose(other)
    }
    fn ring_neg(&self) -> Self {
        -self
    }
}

impl std::str::FromStr for QDOperator {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::exactalg::parse_expr(s)
    }
}

impl CoefMap for QDOperator {
    fn map_coefs(&self, f: &dyn Fn(&CoefPoly) -> CoefPoly) -> Self {
        QDOperator::from_terms(self.terms.iter().map(|(&k, p)| (k, p.map_coeffs(f))))
    }
}

impl<'a> Add<&'a QDOperator> for &QDOperator {
    type Output = QDOperator;
    fn add(self, rhs: &'a QDOperator) -> QDOperator {
        let mut out = self.clone();
        for (&k, p) in &rhs.terms {
            out.add_slice(k, p);
        }
        out
    }
}

impl<'a> Sub<&'a QDOperator> for &QDOperator {
    type Output = QDOperator;
    fn sub(self, rhs: &'a QDOperator) -> QDOperator {
        self + &(-rhs)
    }
}

impl Neg for &QDOperator {
    type Output = QDOperator;
    fn neg(self) -> QDOperator {
        QDOperator::from_terms(self.terms.iter().map(|(&k, p)| (k, -p)))
    }
}

impl<'a> Mul<&'a QDOperator> for &QDOperator {
    type Output = QDOperator;
    fn mul(self, rhs: &'a QDOperator) -> QDOperator {
        self.compose(rhs)
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorTermJson {
    q: u32,
    poly: Vec<CoefPoly>,
}

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    terms: Vec<OperatorTermJson>,
}

impl Serialize for QDOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OperatorJson {
            terms: self.terms.iter().map(|(&q, p)| OperatorTermJson { q, poly: p.coeffs().to_vec() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QDOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let json = OperatorJson::deserialize(d)?;
        Ok(QDOperator::from_terms(json.terms.into_iter().map(|t| (t.q, DensePoly::new(t.poly)))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: u32, j: u32) -> CoefPoly {
        CoefPoly::a(i, j)
    }

    fn op(s: &str) -> QDOperator {
        s.parse().unwrap()
    }

    #[test]
    fn commutation_rule() {
        let dq = QDOperator::d().compose(&QDOperator::q_pow(1));
        assert_eq!(dq, op("q*D + q"));
        let qd = QDOperator::q_pow(1).compose(&QDOperator::d());
        assert_eq!(qd.to_string(), "q*D");
    }

    #[test]
    fn two_factor_product_by_hand() {
        // (D - a11 q)(D - a00 q) = D² - q(a00(D+1) + a11 D) + a00 a11 q²
        let left = &QDOperator::d() - &QDOperator::q_pow(1).scale(&a(1, 1));
        let right = &QDOperator::d() - &QDOperator::q_pow(1).scale(&a(0, 0));
        let expect = op("D^2 - a_0_0*q*D - a_0_0*q - a_1_1*q*D + a_0_0*a_1_1*q^2");
        assert_eq!(left.compose(&right), expect);
    }

    #[test]
    fn dq_powers() {
        assert_eq!(QDOperator::dq_power(1), op("q*D + q"));
        let dq = QDOperator::dq_power(1);
        assert_eq!(QDOperator::dq_power(2), dq.compose(&dq));
        assert_eq!(QDOperator::dq_power(3).d_degree(), Some(3));
    }

    #[test]
    fn regularization_examples() {
        let p0 = op("D^3 + a_0_1*D");
        assert_eq!(p0.regularize(), p0);
        let one = QDOperator::q_term(1, DensePoly::x().scale(&a(1, 1)));
        assert_eq!(one.regularize(), op("a_1_1*q*D^2 + a_1_1*q*D"));
    }

    #[test]
    fn left_division_examples() {
        assert_eq!(op("D^2").left_divide_by_d().unwrap(), op("D"));
        let n0 = op("D - a_0_0*q*D - a_0_0*q");
        assert_eq!(n0.left_divide_by_d().unwrap(), op("1 - a_0_0*q"));
        match op("D^2 + q").left_divide_by_d() {
            Err(WeylError::NotLeftDivisible { q_power, remainder }) => {
                assert_eq!(q_power, 1);
                assert!(remainder.is_one());
            }
            other => panic!("expected NotLeftDivisible, got {other:?}"),
        }
    }

    #[test]
    fn text_round_trip() {
        let l = op("D^2 - a_0_0*q*D - (a_0_0 + a_1_1)*q*D^2 + (a_0_0*a_1_1 - a_0_1)*q^2*D");
        let text = l.to_string();
        assert_eq!(op(&text), l);
        assert_eq!(op("D^3 - 27*q^3").to_string(), "D^3 - 27*q^3");
    }

    #[test]
    fn json_round_trip() {
        let l = op("D^2 - a_0_0*q*D + 1/2*a_0_1*q^2");
        let json = serde_json::to_string(&l).unwrap();
        assert_eq!(
            json,
            r#"{"terms":[{"q":0,"poly":["0","0","1"]},{"q":1,"poly":["0","-a_0_0"]},{"q":2,"poly":["1/2*a_0_1"]}]}"#
        );
        let back: QDOperator = serde_json::from_str(&json).unwrap();
        assert_eq!(back, l);
    }
}
