use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GwError;

/// One insertion `τ_d H^i`. Negative entries are allowed and make the whole
/// symbol zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub d: i64,
    pub i: i64,
}

impl Slot {
    pub fn new(d: i64, i: i64) -> Self {
        Slot { d, i }
    }

    /// Sort key: exponent first, then descendant index.
    fn key(&self) -> (i64, i64) {
        (self.i, self.d)
    }
}

/// `⟨τ_{d_1} H^{i_1}, …, τ_{d_{n-1}} H^{i_{n-1}}, τ_{d_n} H_r⟩`.
///
/// Heads are kept sorted by exponent, ties by descendant index; the tail
/// (the only subscript insertion) stays last. Constructors always
/// canonicalize, so equal symbols compare and hash equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GWSymbol {
    heads: Vec<Slot>,
    tail: Slot,
}

impl GWSymbol {
    pub fn new(heads: Vec<Slot>, tail: Slot) -> Self {
        let mut s = GWSymbol { heads, tail };
        s.heads.sort_by_key(Slot::key);
        s
    }

    /// `⟨H^{e_1}, …, H^{e_k}, H_r⟩` with no descendants.
    pub fn prime(exponents: &[i64], r: i64) -> Self {
        GWSymbol::new(exponents.iter().map(|&e| Slot::new(0, e)).collect(), Slot::new(0, r))
    }

    pub fn heads(&self) -> &[Slot] {
        &self.heads
    }

    pub fn tail(&self) -> Slot {
        self.tail
    }

    /// Number of insertions, tail included.
    pub fn n(&self) -> usize {
        self.heads.len() + 1
    }

    pub fn descendant_sum(&self) -> i64 {
        self.heads.iter().map(|s| s.d).sum::<i64>() + self.tail.d
    }

    /// `Σ d_s + Σ i_s - r + 3 - n`.
    pub fn degree(&self) -> i64 {
        self.descendant_sum() + self.heads.iter().map(|s| s.i).sum::<i64>() - self.tail.i + 3 - self.n() as i64
    }

    /// True when the symbol is zero by convention: a negative entry or a
    /// negative degree.
    pub fn is_trivially_zero(&self) -> bool {
        self.heads.iter().chain(std::iter::once(&self.tail)).any(|s| s.d < 0 || s.i < 0) || self.degree() < 0
    }

    /// No descendants.
    pub fn is_prime(&self) -> bool {
        self.descendant_sum() == 0
    }

    /// Copy with `slot` adjoined to the heads.
    pub fn with_head(&self, slot: Slot) -> GWSymbol {
        let mut heads = self.heads.clone();
        heads.push(slot);
        GWSymbol::new(heads, self.tail)
    }

    /// Copy with head `k` removed.
    pub fn without_head(&self, k: usize) -> GWSymbol {
        let mut heads = self.heads.clone();
        heads.remove(k);
        GWSymbol::new(heads, self.tail)
    }

    /// Copy with head `k` replaced.
    pub fn replace_head(&self, k: usize, slot: Slot) -> GWSymbol {
        let mut heads = self.heads.clone();
        heads[k] = slot;
        GWSymbol::new(heads, self.tail)
    }

    pub fn with_tail(&self, tail: Slot) -> GWSymbol {
        GWSymbol { heads: self.heads.clone(), tail }
    }
}

fn write_slot(f: &mut fmt::Formatter<'_>, s: Slot, sub: bool) -> fmt::Result {
    if s.d != 0 {
        write!(f, "t{} ", s.d)?;
    }
    if sub {
        write!(f, "H_{}", s.i)
    } else {
        write!(f, "H^{}", s.i)
    }
}

impl fmt::Display for GWSymbol {
    /// `<t1 H^2, H^1, H_0>`; `τ_0` is omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for s in &self.heads {
            write_slot(f, *s, false)?;
            write!(f, ", ")?;
        }
        write_slot(f, self.tail, true)?;
        write!(f, ">")
    }
}

fn parse_slot(text: &str) -> Result<(Slot, bool), GwError> {
    let bad = || GwError::Parse(format!("cannot read insertion {text:?}"));
    let mut rest = text.trim();
    let mut d = 0;
    let t_prefix = ["τ", "t"].into_iter().find(|p| rest.starts_with(p));
    if let Some(p) = t_prefix {
        rest = rest[p.len()..].trim_start();
        rest = rest.strip_prefix('_').unwrap_or(rest).trim_start();
        let end = rest
            .char_indices()
            .find(|&(k, c)| !(c.is_ascii_digit() || (k == 0 && c == '-')))
            .map_or(rest.len(), |(k, _)| k);
        d = rest[..end].parse().map_err(|_| bad())?;
        rest = rest[end..].trim_start();
    }
    let rest = rest.strip_prefix('H').ok_or_else(bad)?;
    if rest.is_empty() {
        return Ok((Slot::new(d, 1), false));
    }
    let (sub, num) = if let Some(x) = rest.strip_prefix('^') {
        (false, x)
    } else if let Some(x) = rest.strip_prefix('_') {
        (true, x)
    } else {
        return Err(bad());
    };
    let num = num.trim().trim_start_matches('{').trim_end_matches('}');
    let i = num.parse().map_err(|_| bad())?;
    Ok((Slot::new(d, i), sub))
}

impl FromStr for GWSymbol {
    type Err = GwError;

    /// Accepts `<t1 H^2, H^1, H_0>`, with `⟨⟩` brackets, `τ` for `t` and a
    /// bare `H` for `H^1` also allowed. Exactly the last insertion carries a
    /// subscript.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim();
        let body = body
            .strip_prefix('<')
            .or_else(|| body.strip_prefix('⟨'))
            .and_then(|b| b.strip_suffix('>').or_else(|| b.strip_suffix('⟩')))
            .ok_or_else(|| GwError::Parse(format!("symbol must be enclosed in <...>: {s:?}")))?;
        let parts: Vec<&str> = body.split(',').collect();
        let mut heads = Vec::new();
        for (k, part) in parts.iter().enumerate() {
            let (slot, sub) = parse_slot(part)?;
            let last = k + 1 == parts.len();
            match (sub, last) {
                (true, true) => return Ok(GWSymbol::new(heads, slot)),
                (false, false) => heads.push(slot),
                (true, false) => return Err(GwError::Parse("only the last insertion may carry a subscript".into())),
                (false, true) => return Err(GwError::Parse("the last insertion must be a subscript H_r".into())),
            }
        }
        unreachable!("split always yields at least one part")
    }
}

#[derive(Serialize, Deserialize)]
struct TailJson {
    d: i64,
    r: i64,
}

#[derive(Serialize, Deserialize)]
struct SymbolJson {
    heads: Vec<Slot>,
    tail: TailJson,
}

impl Serialize for GWSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SymbolJson { heads: self.heads.clone(), tail: TailJson { d: self.tail.d, r: self.tail.i } }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GWSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let json = SymbolJson::deserialize(d)?;
        Ok(GWSymbol::new(json.heads, Slot::new(json.tail.d, json.tail.r)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> GWSymbol {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_order() {
        assert_eq!(sym("<H^2, H^1, H_3>"), sym("<H^1, H^2, H_3>"));
        assert_eq!(sym("<H^2, H^1, H_3>").to_string(), "<H^1, H^2, H_3>");
        assert_eq!(sym("<t1 H^1, H^1, H_1>").to_string(), "<H^1, t1 H^1, H_1>");
    }

    #[test]
    fn degrees() {
        assert_eq!(sym("<H^1, H^3, H_1>").degree(), 3);
        assert_eq!(sym("<H^1, H^4, H_5>").degree(), 0);
        assert_eq!(sym("<H_1>").degree(), 1);
        assert_eq!(sym("<t2 H_0>").degree(), 4);
    }

    #[test]
    fn parse_variants() {
        assert_eq!(sym("⟨τ1 H^2, H, H_0⟩"), sym("<t1 H^2, H^1, H_0>"));
        assert_eq!(sym("<t_2 H_{0}>"), GWSymbol::new(vec![], Slot::new(2, 0)));
        assert!(sym("<t-1 H_0>").is_trivially_zero());
        assert!("<H^1, H^2>".parse::<GWSymbol>().is_err());
        assert!("<H_1, H_2>".parse::<GWSymbol>().is_err());
        assert!("H_1".parse::<GWSymbol>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = sym("<t1 H^2, H^1, H_0>");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"heads":[{"d":0,"i":1},{"d":1,"i":2}],"tail":{"d":0,"r":0}}"#);
        assert_eq!(serde_json::from_str::<GWSymbol>(&json).unwrap(), s);
    }
}
