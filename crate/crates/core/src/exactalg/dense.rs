use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{CoefPoly, Rational};

/// Univariate polynomial `Σ c_k X^k` with [`CoefPoly`] coefficients.
///
/// `X` stands for `D` inside operators and for `m + ε` in the Newton
/// recursion. Trailing zero coefficients are always trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DensePoly {
    coeffs: Vec<CoefPoly>,
}

impl DensePoly {
    pub fn new(mut coeffs: Vec<CoefPoly>) -> Self {
        while coeffs.last().is_some_and(CoefPoly::is_zero) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn zero() -> Self {
        DensePoly::default()
    }

    pub fn constant(c: CoefPoly) -> Self {
        DensePoly::new(vec![c])
    }

    pub fn one() -> Self {
        DensePoly::constant(CoefPoly::one())
    }

    /// `X`
    pub fn x() -> Self {
        DensePoly::new(vec![CoefPoly::zero(), CoefPoly::one()])
    }

    /// `X + c`
    pub fn linear(c: CoefPoly) -> Self {
        DensePoly::new(vec![c, CoefPoly::one()])
    }

    pub fn monomial(c: CoefPoly, k: usize) -> Self {
        let mut coeffs = vec![CoefPoly::zero(); k];
        coeffs.push(c);
        DensePoly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[CoefPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> CoefPoly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Multiplicity of the root `X = 0`; `None` for the zero polynomial.
    pub fn mult_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &CoefPoly) -> DensePoly {
        DensePoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn map_coeffs(&self, f: &dyn Fn(&CoefPoly) -> CoefPoly) -> DensePoly {
        DensePoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn eval(&self, x: &CoefPoly) -> CoefPoly {
        let mut acc = CoefPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> CoefPoly {
        self.eval(&CoefPoly::constant(x.clone()))
    }

    pub fn eval_int(&self, x: i64) -> CoefPoly {
        self.eval(&CoefPoly::from_int(x))
    }

    /// `P(X + k)`, expanded.
    pub fn shift_substitute(&self, k: &CoefPoly) -> DensePoly {
        let step = DensePoly::linear(k.clone());
        let mut acc = DensePoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &step) + &DensePoly::constant(c.clone());
        }
        acc
    }

    pub fn shift_int(&self, k: i64) -> DensePoly {
        if k == 0 {
            return self.clone();
        }
        self.shift_substitute(&CoefPoly::from_int(k))
    }

    pub fn derivative(&self) -> DensePoly {
        DensePoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&Rational::from_integer((k as i64).into())))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, r: usize) -> DensePoly {
        (0..r).fold(self.clone(), |p, _| p.derivative())
    }

    /// Synthetic division by `X + c`: returns `(quotient, remainder)`.
    pub fn div_rem_linear(&self, c: &CoefPoly) -> (DensePoly, CoefPoly) {
        let Some(deg) = self.degree() else {
            return (DensePoly::zero(), CoefPoly::zero());
        };
        if deg == 0 {
            return (DensePoly::zero(), self.coeffs[0].clone());
        }
        let mut quotient = vec![CoefPoly::zero(); deg];
        let mut carry = self.coeffs[deg].clone();
        for k in (0..deg).rev() {
            quotient[k] = carry.clone();
            carry = &self.coeffs[k] - &(c * &carry);
        }
        (DensePoly::new(quotient), carry)
    }

    /// `(X + 1)(X + 2)…(X + k)`; the empty product for `k = 0`.
    pub fn rising_product(k: u32) -> DensePoly {
        (1..=k as i64).fold(DensePoly::one(), |acc, s| &acc * &DensePoly::linear(CoefPoly::from_int(s)))
    }

    /// Renders with the given indeterminate name, descending powers.
    pub fn render(&self, x: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let xp = match k {
                0 => String::new(),
                1 => x.to_string(),
                _ => format!("{x}^{k}"),
            };
            parts.push(if xp.is_empty() { format!("({c})") } else { format!("({c})*{xp}") });
        }
        parts.join(" + ")
    }
}

impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("X"))
    }
}

impl<'a> Add<&'a DensePoly> for &DensePoly {
    type Output = DensePoly;
    fn add(self, rhs: &'a DensePoly) -> DensePoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a DensePoly> for &DensePoly {
    type Output = DensePoly;
    fn sub(self, rhs: &'a DensePoly) -> DensePoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Neg for &DensePoly {
    type Output = DensePoly;
    fn neg(self) -> DensePoly {
        DensePoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl<'a> Mul<&'a DensePoly> for &DensePoly {
    type Output = DensePoly;
    fn mul(self, rhs: &'a DensePoly) -> DensePoly {
        if self.is_zero() || rhs.is_zero() {
            return DensePoly::zero();
        }
        let mut out = vec![CoefPoly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        DensePoly::new(out)
    }
}

/// Coefficients of `e^{c q}` through `q^q_max`: `[1, c, c²/2, …]`.
pub fn truncated_exp(c: &CoefPoly, q_max: usize) -> Vec<CoefPoly> {
    let mut out = Vec::with_capacity(q_max + 1);
    let mut term = CoefPoly::one();
    out.push(term.clone());
    for k in 1..=q_max {
        term = (&term * c).scale(&Rational::new(1.into(), (k as i64).into()));
        out.push(term.clone());
    }
    out
}
