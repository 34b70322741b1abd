//! The relations of the ring, each written as an explicit expansion of one
//! symbol into a rational combination of products of other symbols.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{GWSymbol, GwError, Slot};
use crate::exactalg::{factorial, Rational};

/// `coef · Π factors`; an empty product is the constant `coef`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Product {
    pub coef: Rational,
    pub factors: Vec<GWSymbol>,
}

impl Product {
    fn single(coef: Rational, s: GWSymbol) -> Self {
        Product { coef, factors: vec![s] }
    }

    fn pair(a: GWSymbol, b: GWSymbol) -> Self {
        Product { coef: Rational::from_integer(1.into()), factors: vec![a, b] }
    }
}

pub type Expansion = Vec<Product>;

fn one() -> Rational {
    Rational::from_integer(1.into())
}

/// Degree-zero normalization: `(Σd)! / Π d_s!` when `Σd = n - 3`, else 0.
pub fn gw2_normalize(s: &GWSymbol) -> Result<Rational, GwError> {
    if s.degree() != 0 {
        return Err(GwError::DegreeNonzero { degree: s.degree() });
    }
    if s.is_trivially_zero() {
        return Ok(Rational::zero());
    }
    let ds: Vec<i64> = s.heads().iter().map(|h| h.d).chain(std::iter::once(s.tail().d)).collect();
    let total: i64 = ds.iter().sum();
    if total != s.n() as i64 - 3 {
        return Ok(Rational::zero());
    }
    let denom = ds.iter().fold(BigInt::from(1), |acc, &d| acc * factorial(d as u64));
    Ok(Rational::new(factorial(total as u64), denom))
}

/// String equation for a symbol with a head `H^0` (no descendant):
/// removes it and lowers each descendant in turn.
pub fn gw3_string(s: &GWSymbol) -> Result<Expansion, GwError> {
    let k = s
        .heads()
        .iter()
        .position(|h| *h == Slot::new(0, 0))
        .ok_or_else(|| GwError::PreconditionFailed("no H^0 insertion to remove".into()))?;
    if s.n() < 4 && s.degree() == 0 {
        return Err(GwError::PreconditionFailed("three-pointed degree-zero case belongs to GW2".into()));
    }
    let rest = s.without_head(k);
    let mut out = Vec::new();
    for (p, h) in rest.heads().iter().enumerate() {
        if h.d > 0 {
            out.push(Product::single(one(), rest.replace_head(p, Slot::new(h.d - 1, h.i))));
        }
    }
    let t = rest.tail();
    if t.d > 0 {
        out.push(Product::single(one(), rest.with_tail(Slot::new(t.d - 1, t.i))));
    }
    Ok(out)
}

/// Divisor axiom solved for a symbol with fewer than three insertions and
/// positive degree `δ`:
/// `X = (1/δ)[⟨H^1, X⟩ - Σ_s X(τ_{d_s-1} H^{i_s+1}) - X(τ_{d_n-1} H_{r-1})]`.
pub fn gw4_lift(s: &GWSymbol) -> Result<Expansion, GwError> {
    let delta = s.degree();
    if s.n() >= 3 || delta <= 0 {
        return Err(GwError::PreconditionFailed(format!(
            "divisor lift needs fewer than three insertions and positive degree, got {s}"
        )));
    }
    let inv = Rational::new(1.into(), delta.into());
    let mut out = vec![Product::single(inv.clone(), s.with_head(Slot::new(0, 1)))];
    for (p, h) in s.heads().iter().enumerate() {
        out.push(Product::single(-inv.clone(), s.replace_head(p, Slot::new(h.d - 1, h.i + 1))));
    }
    let t = s.tail();
    out.push(Product::single(-inv, s.with_tail(Slot::new(t.d - 1, t.i - 1))));
    Ok(out)
}

/// How to apply topological recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gw5Choice {
    /// Lower head `p` (which has a descendant), keeping head `q` with the tail.
    HeadDescendant { p: usize, q: usize },
    /// Lower the tail, keeping heads `p < q` together.
    TailDescendant { p: usize, q: usize },
}

/// Admissible choices for [`gw5_strip`], in a fixed order.
pub fn gw5_options(s: &GWSymbol) -> Vec<Gw5Choice> {
    let heads = s.heads();
    let mut out = Vec::new();
    for p in 0..heads.len() {
        if heads[p].d > 0 {
            for q in (0..heads.len()).filter(|&q| q != p) {
                out.push(Gw5Choice::HeadDescendant { p, q });
            }
        }
    }
    if s.tail().d > 0 {
        for p in 0..heads.len() {
            for q in p + 1..heads.len() {
                out.push(Gw5Choice::TailDescendant { p, q });
            }
        }
    }
    out
}

/// Splittings `S_1 ⊔ S_2` of `slots`, in subset-bitmask order.
fn splittings(slots: &[Slot]) -> impl Iterator<Item = (Vec<Slot>, Vec<Slot>)> + '_ {
    (0u32..1 << slots.len()).map(move |mask| {
        let (mut s1, mut s2) = (Vec::new(), Vec::new());
        for (k, &slot) in slots.iter().enumerate() {
            if mask >> k & 1 == 1 {
                s1.push(slot);
            } else {
                s2.push(slot);
            }
        }
        (s1, s2)
    })
}

/// Largest `a` for which `⟨heads, H_a⟩` can be non-zero.
fn a_bound(heads: &[Slot]) -> i64 {
    GWSymbol::new(heads.to_vec(), Slot::new(0, 0)).degree()
}

/// Topological recursion. The factor carrying `H_a` has its degree
/// bounded by `a ≤ Σd + Σi + 3 - n` of that factor.
pub fn gw5_strip(s: &GWSymbol, choice: Gw5Choice) -> Result<Expansion, GwError> {
    if !gw5_options(s).contains(&choice) {
        return Err(GwError::PreconditionFailed(format!("{choice:?} does not apply to {s}")));
    }
    let heads = s.heads();
    let (p, q) = match choice {
        Gw5Choice::HeadDescendant { p, q } | Gw5Choice::TailDescendant { p, q } => (p, q),
    };
    let rest: Vec<Slot> = (0..heads.len()).filter(|&k| k != p && k != q).map(|k| heads[k]).collect();
    let tail = s.tail();
    let mut out = Vec::new();
    for (s1, s2) in splittings(&rest) {
        let (left_heads, right_heads, right_tail) = match choice {
            Gw5Choice::HeadDescendant { .. } => {
                let mut left = vec![Slot::new(heads[p].d - 1, heads[p].i)];
                left.extend(&s1);
                let mut right = s2.clone();
                right.push(heads[q]);
                (left, right, tail)
            }
            Gw5Choice::TailDescendant { .. } => {
                let mut left = s1.clone();
                left.extend([heads[p], heads[q]]);
                (left, s2.clone(), Slot::new(tail.d - 1, tail.i))
            }
        };
        for a in 0..=a_bound(&left_heads) {
            let f1 = GWSymbol::new(left_heads.clone(), Slot::new(0, a));
            let f2 = GWSymbol::new(right_heads.clone(), right_tail).with_head(Slot::new(0, a));
            out.push(Product::pair(f1, f2));
        }
    }
    Ok(out)
}

/// Admissible head pairs `(p, q)` for [`gw6_shuffle`]: `p ≠ q` with
/// `i_p ≤ i_q`.
pub fn gw6_options(s: &GWSymbol) -> Vec<(usize, usize)> {
    let heads = s.heads();
    let mut out = Vec::new();
    for p in 0..heads.len() {
        for q in (0..heads.len()).filter(|&q| q != p) {
            if heads[p].i <= heads[q].i {
                out.push((p, q));
            }
        }
    }
    out
}

/// Quadratic relation for a prime symbol whose head exponents are all at
/// least 2. With `i = i_p - 1`, `j = i_q` and `S` the remaining heads:
///
/// `X = ⟨H^{j+1}, H^i, S, H_r⟩ + side(j, i) - side(i, j)` where
/// `side(x, y) = Σ_{S_1 ⊔ S_2 = S} Σ_a ⟨S_1, H^1, H^x, H_a⟩ ⟨H^a, S_2, H^y, H_r⟩`
/// omits the single term equal to the left-hand side.
pub fn gw6_shuffle(s: &GWSymbol, pair: (usize, usize)) -> Result<Expansion, GwError> {
    let heads = s.heads();
    if !s.is_prime() || s.n() < 3 || heads.iter().any(|h| h.i < 2) {
        return Err(GwError::PreconditionFailed(format!(
            "quadratic relation needs a prime symbol with all exponents at least 2, got {s}"
        )));
    }
    if !gw6_options(s).contains(&pair) {
        return Err(GwError::PreconditionFailed(format!("pair {pair:?} does not apply to {s}")));
    }
    let (p, q) = pair;
    let (i, j) = (heads[p].i - 1, heads[q].i);
    let rest: Vec<Slot> = (0..heads.len()).filter(|&k| k != p && k != q).map(|k| heads[k]).collect();
    let tail = s.tail();
    let mut out = Vec::new();
    let mut c2 = rest.clone();
    c2.extend([Slot::new(0, j + 1), Slot::new(0, i)]);
    out.push(Product::single(one(), GWSymbol::new(c2, tail)));
    let side = |x: i64, y: i64, excluded: i64, sign: Rational, out: &mut Expansion| {
        for (s1, s2) in splittings(&rest) {
            let mut left = s1.clone();
            left.extend([Slot::new(0, 1), Slot::new(0, x)]);
            let mut right = s2.clone();
            right.push(Slot::new(0, y));
            for a in 0..=a_bound(&left) {
                if s1.is_empty() && a == excluded {
                    continue;
                }
                let f1 = GWSymbol::new(left.clone(), Slot::new(0, a));
                let f2 = GWSymbol::new(right.clone(), tail).with_head(Slot::new(0, a));
                out.push(Product { coef: sign.clone(), factors: vec![f1, f2] });
            }
        }
    };
    side(j, i, j + 1, one(), &mut out);
    side(i, j, i + 1, -one(), &mut out);
    Ok(out)
}
