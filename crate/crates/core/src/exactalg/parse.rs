//! Small recursive-descent parser shared by the text formats.
//!
//! Grammar: sums and differences of products of powers of atoms. Atoms are
//! rational literals (`7/6`), coupling variables (`a_0_1`), parenthesised
//! expressions, and whatever extra symbols the target ring accepts (`q`, `D`).
//! Products are evaluated left to right, so non-commutative targets keep the
//! written order.

use num_bigint::BigInt;
use thiserror::Error;

use super::{CoefPoly, CoefVar, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {0:?} at offset {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("trailing input at offset {0}")]
    Trailing(usize),
    #[error("division by zero in literal")]
    ZeroDenominator,
    #[error("{0}")]
    Invalid(String),
}

/// Rings that the text parser can build.
pub trait ExprRing: Sized + Clone {
    fn from_rational(r: Rational) -> Self;
    fn from_coef_var(v: CoefVar) -> Self;
    fn from_symbol(_name: &str) -> Option<Self> {
        None
    }
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;
}

impl ExprRing for CoefPoly {
    fn from_rational(r: Rational) -> Self {
        CoefPoly::constant(r)
    }
    fn from_coef_var(v: CoefVar) -> Self {
        CoefPoly::var(v)
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        match c {
            c if c.is_whitespace() => k += 1,
            '0'..='9' => {
                let start = k;
                while k < chars.len() && chars[k].1.is_ascii_digit() {
                    k += 1;
                }
                let digits: String = chars[start..k].iter().map(|&(_, c)| c).collect();
                out.push((Tok::Num(digits.parse().expect("digits")), pos));
            }
            c if c.is_ascii_alphabetic() => {
                let start = k;
                while k < chars.len() && (chars[k].1.is_ascii_alphanumeric() || chars[k].1 == '_') {
                    k += 1;
                }
                out.push((Tok::Ident(chars[start..k].iter().map(|&(_, c)| c).collect()), pos));
            }
            _ => {
                let t = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    other => return Err(ParseError::UnexpectedChar(other, pos)),
                };
                out.push((t, pos));
                k += 1;
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expr<R: ExprRing>(&mut self) -> Result<R, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let first = self.term::<R>()?;
        let mut acc = if negate { first.ring_neg() } else { first };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.ring_add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.ring_add(&self.term::<R>()?.ring_neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<R: ExprRing>(&mut self) -> Result<R, ParseError> {
        let mut acc = self.power::<R>()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = acc.ring_mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power<R: ExprRing>(&mut self) -> Result<R, ParseError> {
        let base = self.atom::<R>()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let e = match self.next() {
            Some(Tok::Num(n)) => u32::try_from(n).map_err(|_| ParseError::Invalid("exponent too large".into()))?,
            Some(_) => return Err(ParseError::Invalid("exponent must be a non-negative integer".into())),
            None => return Err(ParseError::UnexpectedEnd),
        };
        let mut acc = R::from_rational(Rational::from_integer(1.into()));
        for _ in 0..e {
            acc = acc.ring_mul(&base);
        }
        Ok(acc)
    }

    fn atom<R: ExprRing>(&mut self) -> Result<R, ParseError> {
        match self.next() {
            Some(Tok::Num(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.next() {
                        Some(Tok::Num(d)) if d != BigInt::from(0) => Ok(R::from_rational(Rational::new(n, d))),
                        Some(Tok::Num(_)) => Err(ParseError::ZeroDenominator),
                        _ => Err(ParseError::Invalid("expected integer denominator".into())),
                    }
                } else {
                    Ok(R::from_rational(Rational::from_integer(n)))
                }
            }
            Some(Tok::Ident(name)) => {
                if let Some(v) = CoefVar::parse(&name) {
                    return Ok(R::from_coef_var(v));
                }
                R::from_symbol(&name).ok_or(ParseError::UnknownSymbol(name))
            }
            Some(Tok::LParen) => {
                let inner = self.expr::<R>()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(ParseError::Invalid("missing ')'".into())),
                }
            }
            Some(t) => Err(ParseError::Invalid(format!("unexpected token {t:?}"))),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}

/// Parses a whole string into `R`.
pub fn parse_expr<R: ExprRing>(src: &str) -> Result<R, ParseError> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(ParseError::UnexpectedEnd);
    }
    let mut p = Parser { toks, pos: 0 };
    let value = p.expr::<R>()?;
    if p.pos < p.toks.len() {
        return Err(ParseError::Trailing(p.toks[p.pos].1));
    }
    Ok(value)
}

impl std::str::FromStr for CoefPoly {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}

/// Parses a rational literal such as `-7/6` or `27`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let p: CoefPoly = parse_expr(s)?;
    p.constant_value().ok_or_else(|| ParseError::Invalid(format!("{s:?} is not a rational constant")))
}
