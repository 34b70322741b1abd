use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::Rational;

/// The coupling variable `a_ij`, `i <= j`.
///
/// Its weight `j - i + 1` is always at least one. Index pairs below the
/// diagonal are never stored as variables: see [`CoefPoly::a`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoefVar {
    pub i: u32,
    pub j: u32,
}

impl CoefVar {
    /// Returns `None` for `i > j`; those pairs are constants, not variables.
    pub fn new(i: u32, j: u32) -> Option<Self> {
        (i <= j).then_some(CoefVar { i, j })
    }

    pub fn weight(&self) -> i64 {
        self.j as i64 - self.i as i64 + 1
    }

    /// Parses `a_3_12` style names.
    pub fn parse(name: &str) -> Option<Self> {
        let rest = name.strip_prefix("a_")?;
        let (i, j) = rest.split_once('_')?;
        let i: u32 = i.parse().ok()?;
        let j: u32 = j.parse().ok()?;
        CoefVar::new(i, j)
    }
}

impl fmt::Display for CoefVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a_{}_{}", self.i, self.j)
    }
}

/// Product of variables, kept sorted by variable with no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(CoefVar, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: CoefVar) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (CoefVar, u32)>) -> Self {
        let mut map: BTreeMap<CoefVar, u32> = BTreeMap::new();
        for (v, e) in factors {
            *map.entry(v).or_default() += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn factors(&self) -> &[(CoefVar, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn weighted_degree(&self) -> i64 {
        self.0.iter().map(|&(v, e)| v.weight() * e as i64).sum()
    }

    pub fn exponent(&self, v: CoefVar) -> u32 {
        self.0.binary_search_by(|(w, _)| w.cmp(&v)).map(|k| self.0[k].1).unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        out.push((va, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((vb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&x), None) => {
                    out.push(x);
                    a.next();
                }
                (None, Some(&&y)) => {
                    out.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial(out)
    }
}

/// Graded lexicographic: total degree first, then exponents compared
/// variable by variable in increasing `(i, j)` order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let by_degree = self.total_degree().cmp(&other.total_degree());
        if by_degree != Ordering::Equal {
            return by_degree;
        }
        for (x, y) in self.0.iter().zip(other.0.iter()) {
            if x.0 != y.0 {
                // The side holding the smaller variable has the larger exponent there.
                return if x.0 < y.0 { Ordering::Greater } else { Ordering::Less };
            }
            if x.1 != y.1 {
                return x.1.cmp(&y.1);
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial over the rationals in the variables `a_ij`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CoefPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl CoefPoly {
    pub fn zero() -> Self {
        CoefPoly::default()
    }

    pub fn one() -> Self {
        CoefPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = CoefPoly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn from_int(n: i64) -> Self {
        CoefPoly::constant(Rational::from_integer(n.into()))
    }

    pub fn var(v: CoefVar) -> Self {
        CoefPoly::term(Rational::one(), Monomial::var(v))
    }

    /// The coupling `a_ij` with the index conventions folded in:
    /// `a_{j+1,j}` is the constant 1 and `a_ij` with `i > j + 1` is 0.
    pub fn a(i: u32, j: u32) -> Self {
        match CoefVar::new(i, j) {
            Some(v) => CoefPoly::var(v),
            None if i == j + 1 => CoefPoly::one(),
            None => CoefPoly::zero(),
        }
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = CoefPoly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is a constant (including zero).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn variables(&self) -> Vec<CoefVar> {
        let mut vs: Vec<CoefVar> = self.terms.keys().flat_map(|m| m.factors().iter().map(|&(v, _)| v)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> CoefPoly {
        if c.is_zero() {
            return CoefPoly::zero();
        }
        CoefPoly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> CoefPoly {
        let mut acc = CoefPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Weighted degrees present among the terms, with `weight(a_ij) = j - i + 1`.
    pub fn weighted_degrees(&self) -> Vec<i64> {
        let mut ds: Vec<i64> = self.terms.keys().map(Monomial::weighted_degree).collect();
        ds.sort();
        ds.dedup();
        ds
    }

    /// True when every term has weighted degree `deg` (vacuously for zero).
    pub fn is_weighted_homogeneous(&self, deg: i64) -> bool {
        self.terms.keys().all(|m| m.weighted_degree() == deg)
    }

    /// Substitutes polynomials for variables; `f` returning `None` keeps the variable.
    pub fn substitute(&self, f: &dyn Fn(CoefVar) -> Option<CoefPoly>) -> CoefPoly {
        let mut images: BTreeMap<CoefVar, Option<CoefPoly>> = BTreeMap::new();
        let mut out = CoefPoly::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut value = CoefPoly::constant(c.clone());
            for &(v, e) in m.factors() {
                let image = images.entry(v).or_insert_with(|| f(v));
                match image {
                    Some(p) => value = &value * &p.pow(e),
                    None => kept.push((v, e)),
                }
                if value.is_zero() {
                    break;
                }
            }
            if value.is_zero() {
                continue;
            }
            let kept = Monomial(kept);
            for (vm, vc) in value.terms {
                out.add_term(vm.mul(&kept), vc);
            }
        }
        out
    }

    /// Substitutes rationals for the listed variables.
    pub fn evaluate_partial(&self, assignment: &BTreeMap<CoefVar, Rational>) -> CoefPoly {
        self.substitute(&|v| assignment.get(&v).map(|c| CoefPoly::constant(c.clone())))
    }

    /// LaTeX rendering with `a_{ij}` subscripts.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let coef = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
            };
            if m.is_one() {
                s.push_str(&coef);
                continue;
            }
            if !a.is_one() {
                s.push_str(&coef);
            }
            for &(v, e) in m.factors() {
                if v.i < 10 && v.j < 10 {
                    s.push_str(&format!("a_{{{}{}}}", v.i, v.j));
                } else {
                    s.push_str(&format!("a_{{{},{}}}", v.i, v.j));
                }
                if e > 1 {
                    s.push_str(&format!("^{{{e}}}"));
                }
            }
        }
        s
    }
}

impl fmt::Display for CoefPoly {
    /// Canonical text: terms in descending graded-lex order, e.g.
    /// `a_0_0^2 + 7/6*a_0_0*a_0_1 - 1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl From<Rational> for CoefPoly {
    fn from(c: Rational) -> Self {
        CoefPoly::constant(c)
    }
}

impl<'a> Add<&'a CoefPoly> for &CoefPoly {
    type Output = CoefPoly;
    fn add(self, rhs: &'a CoefPoly) -> CoefPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for CoefPoly {
    type Output = CoefPoly;
    fn add(mut self, rhs: CoefPoly) -> CoefPoly {
        self += &rhs;
        self
    }
}

impl<'a> AddAssign<&'a CoefPoly> for CoefPoly {
    fn add_assign(&mut self, rhs: &'a CoefPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> SubAssign<&'a CoefPoly> for CoefPoly {
    fn sub_assign(&mut self, rhs: &'a CoefPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl<'a> Sub<&'a CoefPoly> for &CoefPoly {
    type Output = CoefPoly;
    fn sub(self, rhs: &'a CoefPoly) -> CoefPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for CoefPoly {
    type Output = CoefPoly;
    fn sub(mut self, rhs: CoefPoly) -> CoefPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &CoefPoly {
    type Output = CoefPoly;
    fn neg(self) -> CoefPoly {
        CoefPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Neg for CoefPoly {
    type Output = CoefPoly;
    fn neg(self) -> CoefPoly {
        -&self
    }
}

impl<'a> Mul<&'a CoefPoly> for &CoefPoly {
    type Output = CoefPoly;
    fn mul(self, rhs: &'a CoefPoly) -> CoefPoly {
        let mut out = CoefPoly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for CoefPoly {
    type Output = CoefPoly;
    fn mul(self, rhs: CoefPoly) -> CoefPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn a(i: u32, j: u32) -> CoefPoly {
        CoefPoly::a(i, j)
    }

    #[test]
    fn additive_inverse_cancels() {
        let x = &a(0, 1) + &a(0, 0).pow(2);
        let y = -a(0, 0).pow(2);
        assert_eq!(&x + &y, a(0, 1));
    }

    #[test]
    fn monomial_square() {
        let sq = &a(1, 1) * &a(1, 1);
        assert_eq!(sq.to_string(), "a_1_1^2");
    }

    #[test]
    fn rational_scaling() {
        let p = (&a(0, 1) * &a(0, 0)).scale(&rat(7, 6));
        assert_eq!(p.scale(&rat(6, 1)).to_string(), "7*a_0_0*a_0_1");
    }

    #[test]
    fn index_folding() {
        assert!(a(3, 2).is_one());
        assert!(a(4, 2).is_zero());
        assert_eq!(CoefVar::new(1, 3).unwrap().weight(), 3);
    }

    #[test]
    fn canonical_order_is_graded() {
        let p = &a(0, 1).scale(&rat(1, 2)) + &a(0, 0).pow(2);
        assert_eq!(p.to_string(), "a_0_0^2 + 1/2*a_0_1");
        let q = &(&a(0, 0) - &CoefPoly::one()) * &a(0, 0);
        assert_eq!(q.to_string(), "a_0_0^2 - a_0_0");
    }

    #[test]
    fn substitution_shift() {
        // a_1_1 -> a_1_1 - a_0_0 applied to a_1_1^2
        let p = a(1, 1).pow(2);
        let s = p.substitute(&|v| (v == CoefVar { i: 1, j: 1 }).then(|| &a(1, 1) - &a(0, 0)));
        let expect = &(&a(1, 1).pow(2) - &(&a(1, 1) * &a(0, 0)).scale(&rat(2, 1))) + &a(0, 0).pow(2);
        assert_eq!(s, expect);
    }

    #[test]
    fn latex_subscripts() {
        let p = &a(0, 1).scale(&rat(1, 2)) + &a(0, 0).pow(2);
        assert_eq!(p.to_latex(), "a_{00}^{2} + \\frac{1}{2}a_{01}");
    }
}
