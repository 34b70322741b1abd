use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::exactalg::{CoefMap, CoefPoly, ParseError, Truncated};

/// `I = Σ_{i<h_max} Σ_{m≤q_max} c_{i,m} h^i q^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbedSeries {
    h_max: usize,
    q_max: usize,
    /// `slices[m]` holds the `h`-coefficients of `q^m`.
    slices: Vec<Vec<CoefPoly>>,
}

impl PerturbedSeries {
    pub fn zero(h_max: usize, q_max: usize) -> Self {
        PerturbedSeries { h_max, q_max, slices: vec![vec![CoefPoly::zero(); h_max]; q_max + 1] }
    }

    /// Builds from `q`-slices, each an element of `CoefPoly[h]/(h^h_max)`.
    pub fn from_slices(h_max: usize, slices: Vec<Truncated>) -> Self {
        assert!(!slices.is_empty(), "a series needs at least the q^0 slice");
        let q_max = slices.len() - 1;
        let slices = slices.into_iter().map(|t| Truncated::from_coeffs(t.into_coeffs(), h_max).into_coeffs()).collect();
        PerturbedSeries { h_max, q_max, slices }
    }

    pub fn h_max(&self) -> usize {
        self.h_max
    }

    pub fn q_max(&self) -> usize {
        self.q_max
    }

    /// Coefficient of `h^i q^m`; zero outside the stored range.
    pub fn get(&self, i: usize, m: usize) -> CoefPoly {
        self.slices.get(m).and_then(|s| s.get(i)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, m: usize, c: CoefPoly) {
        self.slices[m][i] = c;
    }

    /// The `q^m` slice as a truncated `h`-polynomial.
    pub fn q_slice(&self, m: usize) -> Truncated {
        Truncated::from_coeffs(self.slices[m].clone(), self.h_max)
    }

    /// `I^i`, the `q`-series multiplying `h^i`.
    pub fn h_component(&self, i: usize) -> Vec<CoefPoly> {
        self.slices.iter().map(|s| s[i].clone()).collect()
    }

    /// Reduces modulo `h^h_max` and `q^{q_max+1}` with smaller bounds.
    pub fn truncate(&self, h_max: usize, q_max: usize) -> PerturbedSeries {
        let h_max = h_max.min(self.h_max);
        let q_max = q_max.min(self.q_max);
        PerturbedSeries { h_max, q_max, slices: self.slices[..=q_max].iter().map(|s| s[..h_max].to_vec()).collect() }
    }

    /// Every coefficient of `q^m` has weighted degree `m`.
    pub fn is_weighted_homogeneous(&self) -> bool {
        self.slices.iter().enumerate().all(|(m, s)| s.iter().all(|c| c.is_weighted_homogeneous(m as i64)))
    }

    /// Non-zero coefficients as `(h, q, coefficient)`, ordered by `h` then `q`.
    pub fn nonzero_terms(&self) -> Vec<(usize, usize, &CoefPoly)> {
        let mut out = Vec::new();
        for i in 0..self.h_max {
            for (m, s) in self.slices.iter().enumerate() {
                if !s[i].is_zero() {
                    out.push((i, m, &s[i]));
                }
            }
        }
        out
    }
}

impl CoefMap for PerturbedSeries {
    fn map_coefs(&self, f: &dyn Fn(&CoefPoly) -> CoefPoly) -> Self {
        PerturbedSeries {
            h_max: self.h_max,
            q_max: self.q_max,
            slices: self.slices.iter().map(|s| s.iter().map(f).collect()).collect(),
        }
    }
}

impl fmt::Display for PerturbedSeries {
    /// One header line, then one line `h^i q^m: coefficient` per non-zero term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "h_max {} q_max {}", self.h_max, self.q_max)?;
        for (i, m, c) in self.nonzero_terms() {
            writeln!(f, "h^{i} q^{m}: {c}")?;
        }
        Ok(())
    }
}

impl FromStr for PerturbedSeries {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| ParseError::Invalid(msg.to_string());
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or(ParseError::UnexpectedEnd)?;
        let words: Vec<&str> = header.split_whitespace().collect();
        let (h_max, q_max) = match words.as_slice() {
            ["h_max", h, "q_max", q] => {
                (h.parse::<usize>().map_err(|_| bad("bad h_max"))?, q.parse::<usize>().map_err(|_| bad("bad q_max"))?)
            }
            _ => return Err(bad("expected header `h_max K q_max Q`")),
        };
        let mut out = PerturbedSeries::zero(h_max, q_max);
        for line in lines {
            let (key, value) = line.split_once(':').ok_or_else(|| bad("expected `h^i q^m: coefficient`"))?;
            let mut parts = key.split_whitespace();
            let i = parts
                .next()
                .and_then(|p| p.strip_prefix("h^"))
                .and_then(|p| p.parse::<usize>().ok())
                .ok_or_else(|| bad("bad h power"))?;
            let m = parts
                .next()
                .and_then(|p| p.strip_prefix("q^"))
                .and_then(|p| p.parse::<usize>().ok())
                .ok_or_else(|| bad("bad q power"))?;
            if i >= h_max || m > q_max {
                return Err(bad("term outside the declared truncation"));
            }
            out.slices[m][i] = value.trim().parse()?;
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    h: usize,
    q: usize,
    poly: CoefPoly,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    h_max: usize,
    q_max: usize,
    coeffs: Vec<TermJson>,
}

impl Serialize for PerturbedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeriesJson {
            h_max: self.h_max,
            q_max: self.q_max,
            coeffs: self.nonzero_terms().into_iter().map(|(h, q, c)| TermJson { h, q, poly: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PerturbedSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let json = SeriesJson::deserialize(d)?;
        let mut out = PerturbedSeries::zero(json.h_max, json.q_max);
        for t in json.coeffs {
            if t.h >= json.h_max || t.q > json.q_max {
                return Err(D::Error::custom(format!("term h^{} q^{} outside the truncation", t.h, t.q)));
            }
            out.slices[t.q][t.h] = t.poly;
        }
        Ok(out)
    }
}

/// `S_k = Σ_{i≤k} J^{k-i} t^i / i!` with `t = log q`.
///
/// `components[i]` is the `q`-series multiplying `t^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogSolution {
    pub k: usize,
    pub components: Vec<Vec<CoefPoly>>,
}

impl fmt::Display for LogSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "S_{}", self.k)?;
        for (i, series) in self.components.iter().enumerate() {
            for (m, c) in series.iter().enumerate() {
                if !c.is_zero() {
                    writeln!(f, "t^{i} q^{m}: {c}")?;
                }
            }
        }
        Ok(())
    }
}
