use num_traits::{One, Zero};

use super::{CoefPoly, DensePoly, Rational};

/// Element of `CoefPoly[ε]/(ε^K)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncated {
    coeffs: Vec<CoefPoly>,
}

impl Truncated {
    pub fn zero(order: usize) -> Self {
        Truncated { coeffs: vec![CoefPoly::zero(); order] }
    }

    pub fn one(order: usize) -> Self {
        let mut t = Truncated::zero(order);
        if order > 0 {
            t.coeffs[0] = CoefPoly::one();
        }
        t
    }

    /// Pads or truncates to `order` coefficients.
    pub fn from_coeffs(mut coeffs: Vec<CoefPoly>, order: usize) -> Self {
        coeffs.resize(order, CoefPoly::zero());
        Truncated { coeffs }
    }

    pub fn from_dense(p: &DensePoly, order: usize) -> Self {
        Truncated::from_coeffs(p.coeffs().iter().take(order).cloned().collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[CoefPoly] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<CoefPoly> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(CoefPoly::is_zero)
    }

    pub fn add(&self, other: &Truncated) -> Truncated {
        Truncated { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Truncated) -> Truncated {
        Truncated { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Truncated {
        Truncated { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &CoefPoly) -> Truncated {
        Truncated { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &Truncated) -> Truncated {
        let k = self.order().min(other.order());
        let mut out = vec![CoefPoly::zero(); k];
        for (i, a) in self.coeffs.iter().enumerate().take(k) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(k - i) {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Truncated { coeffs: out }
    }

    /// Inverse when the constant term is a nonzero rational; `None` otherwise.
    pub fn inverse(&self) -> Option<Truncated> {
        let c0 = self.coeffs.first()?.constant_value()?;
        if c0.is_zero() {
            return None;
        }
        let inv0 = Rational::one() / c0;
        let mut out: Vec<CoefPoly> = Vec::with_capacity(self.order());
        out.push(CoefPoly::constant(inv0.clone()));
        for k in 1..self.order() {
            let mut acc = CoefPoly::zero();
            for j in 1..=k {
                acc += &(&self.coeffs[j] * &out[k - j]);
            }
            out.push(acc.scale(&-inv0.clone()));
        }
        Some(Truncated { coeffs: out })
    }
}
