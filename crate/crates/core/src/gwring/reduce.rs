use std::collections::HashMap;
use std::sync::{Mutex, RwLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::relations::{gw2_normalize, gw4_lift, gw5_options, gw5_strip, gw6_options, gw6_shuffle, Expansion};
use super::{GWSymbol, GwError};
use crate::exactalg::{CoefPoly, Rational};

/// Picks one of `count ≥ 1` admissible rewrites.
pub trait Strategy: Send + Sync {
    fn pick(&self, count: usize) -> usize;
}

/// Always the first option.
#[derive(Clone, Copy, Debug, Default)]
pub struct FirstChoice;

impl Strategy for FirstChoice {
    fn pick(&self, _count: usize) -> usize {
        0
    }
}

/// Uniformly random options from a seeded generator.
#[derive(Debug)]
pub struct SeededChoice {
    rng: Mutex<ChaCha8Rng>,
}

impl SeededChoice {
    pub fn new(seed: u64) -> Self {
        SeededChoice { rng: Mutex::new(ChaCha8Rng::seed_from_u64(seed)) }
    }
}

impl Strategy for SeededChoice {
    fn pick(&self, count: usize) -> usize {
        self.rng.lock().expect("rng lock").gen_range(0..count)
    }
}

/// Memo table of reduced symbols. Insertion keeps the first value stored.
#[derive(Debug, Default)]
pub struct ReduceCache {
    map: RwLock<HashMap<GWSymbol, CoefPoly>>,
}

impl ReduceCache {
    pub fn new() -> Self {
        ReduceCache::default()
    }

    pub fn get(&self, s: &GWSymbol) -> Option<CoefPoly> {
        self.map.read().expect("cache lock").get(s).cloned()
    }

    /// Stores `value` unless an entry exists; returns the stored value.
    pub fn insert(&self, s: GWSymbol, value: CoefPoly) -> CoefPoly {
        self.map.write().expect("cache lock").entry(s).or_insert(value).clone()
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Lexicographic termination measure; every recursive call must strictly
/// decrease it.
///
/// Components: degree, descendant sum, missing points below three, number
/// of points, whether all head exponents are at least 2, and minus the sum
/// of squared head exponents.
pub fn measure(s: &GWSymbol) -> [i64; 6] {
    let n = s.n() as i64;
    let hard = i64::from(s.heads().iter().all(|h| h.i >= 2));
    let squares: i64 = s.heads().iter().map(|h| h.i * h.i).sum();
    [s.degree(), s.descendant_sum(), (3 - n).max(0), n, hard, -squares]
}

/// Rewrites symbols to polynomials in the couplings `a_ij`.
pub struct Reducer {
    cache: ReduceCache,
    strategy: Box<dyn Strategy>,
}

impl Default for Reducer {
    fn default() -> Self {
        Reducer::new(Box::new(FirstChoice))
    }
}

impl Reducer {
    pub fn new(strategy: Box<dyn Strategy>) -> Self {
        Reducer { cache: ReduceCache::new(), strategy }
    }

    pub fn seeded(seed: u64) -> Self {
        Reducer::new(Box::new(SeededChoice::new(seed)))
    }

    pub fn cache(&self) -> &ReduceCache {
        &self.cache
    }

    pub fn reduce(&self, s: &GWSymbol) -> Result<CoefPoly, GwError> {
        if s.is_trivially_zero() {
            return Ok(CoefPoly::zero());
        }
        if let Some(v) = self.cache.get(s) {
            return Ok(v);
        }
        let value = self.compute(s)?;
        debug_assert!(value.is_weighted_homogeneous(s.degree()), "{s} reduced to {value}");
        Ok(self.cache.insert(s.clone(), value))
    }

    fn reduce_below(&self, parent: &GWSymbol, child: &GWSymbol) -> Result<CoefPoly, GwError> {
        if child.is_trivially_zero() {
            return Ok(CoefPoly::zero());
        }
        if measure(child) >= measure(parent) {
            return Err(GwError::MeasureNotDecreasing { from: parent.to_string(), to: child.to_string() });
        }
        self.reduce(child)
    }

    fn evaluate(&self, parent: &GWSymbol, expansion: &Expansion) -> Result<CoefPoly, GwError> {
        let mut acc = CoefPoly::zero();
        'products: for prod in expansion {
            // Factor degrees add up to the parent's, so dropping zero
            // products first keeps every remaining factor below it.
            if prod.factors.iter().any(GWSymbol::is_trivially_zero) {
                continue;
            }
            let mut value = CoefPoly::constant(prod.coef.clone());
            for f in &prod.factors {
                let v = self.reduce_below(parent, f)?;
                if v.is_zero() {
                    continue 'products;
                }
                value = &value * &v;
            }
            acc += &value;
        }
        Ok(acc)
    }

    fn compute(&self, s: &GWSymbol) -> Result<CoefPoly, GwError> {
        let delta = s.degree();
        if delta == 0 {
            return Ok(CoefPoly::constant(gw2_normalize(s)?));
        }
        if s.n() < 3 {
            return self.evaluate(s, &gw4_lift(s)?);
        }
        if !s.is_prime() {
            let options = gw5_options(s);
            let choice = options[self.strategy.pick(options.len())];
            return self.evaluate(s, &gw5_strip(s, choice)?);
        }
        let heads = s.heads();
        if heads.iter().any(|h| h.i == 0) {
            return Ok(CoefPoly::zero());
        }
        if let Some(k) = heads.iter().position(|h| h.i == 1) {
            if s.n() == 3 {
                let other = heads[1 - k].i as u32;
                return Ok(CoefPoly::a(s.tail().i as u32, other));
            }
            let rest = s.without_head(k);
            let v = self.reduce_below(s, &rest)?;
            return Ok(v.scale(&Rational::from_integer(delta.into())));
        }
        let options = gw6_options(s);
        let pair = options[self.strategy.pick(options.len())];
        self.evaluate(s, &gw6_shuffle(s, pair)?)
    }
}
