//! Text and JSON forms of exact polynomials.
//!
//! Text grammar (whitespace is insignificant):
//!
//! ```text
//! poly     := sign? term (sign term)*
//! term     := factor ('*' factor)*
//! factor   := rational | var ('^' int)?
//! rational := int ('/' int)?
//! var      := 'x' int            // x1 .. xn
//! ```
//!
//! JSON form: `{"n": 2, "terms": [{"exp": [1, 0], "num": "-2", "den": "1"}]}`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::poly::{Monomial, SparsePoly};
use crate::{Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at byte {pos} (polynomial has {n} variables)")]
    UnknownVariable { name: String, pos: usize, n: usize },
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.into() }
    }
}

/// A parsed factor before the dimension is known.
enum Factor {
    Coef(Rational),
    Var { index: usize, exp: u32, pos: usize },
}

/// Parses the text grammar. When `n` is `None` the dimension is the largest
/// variable index that occurs.
pub fn parse_poly(text: &str, n: Option<usize>) -> Result<Poly, ParseError> {
    let mut lx = Lexer { src: text.as_bytes(), pos: 0 };
    let mut raw_terms: Vec<(Rational, Vec<(usize, u32, usize)>)> = Vec::new();
    let mut first = true;
    loop {
        let mut sign = Rational::one();
        if lx.eat(b'-') {
            sign = -sign;
        } else if !lx.eat(b'+') && !first {
            break;
        }
        first = false;
        let mut coef = sign;
        let mut vars = Vec::new();
        loop {
            match parse_factor(&mut lx)? {
                Factor::Coef(c) => coef *= c,
                Factor::Var { index, exp, pos } => vars.push((index, exp, pos)),
            }
            if !lx.eat(b'*') {
                break;
            }
        }
        raw_terms.push((coef, vars));
    }
    if lx.peek().is_some() {
        return Err(lx.err("unexpected character"));
    }

    let max_index = raw_terms
        .iter()
        .flat_map(|(_, v)| v.iter().map(|(i, _, _)| *i))
        .max();
    let dim = match n {
        Some(n) => n,
        None => max_index.unwrap_or(0),
    };
    let mut poly = Poly::zero(dim);
    for (coef, vars) in raw_terms {
        let mut exp = vec![0u32; dim];
        for (index, e, pos) in vars {
            if index == 0 || index > dim {
                return Err(ParseError::UnknownVariable { name: format!("x{index}"), pos, n: dim });
            }
            exp[index - 1] += e;
        }
        poly.add_term(Monomial::new(exp), coef);
    }
    Ok(poly)
}

fn parse_factor(lx: &mut Lexer<'_>) -> Result<Factor, ParseError> {
    match lx.peek() {
        Some(b'x') => {
            let pos = lx.pos;
            lx.pos += 1;
            let idx = lx.digits().ok_or_else(|| lx.err("expected variable index after `x`"))?;
            let index: usize = idx.parse().map_err(|_| lx.err("variable index too large"))?;
            let exp = if lx.eat(b'^') {
                let d = lx.digits().ok_or_else(|| lx.err("expected exponent after `^`"))?;
                d.parse().map_err(|_| lx.err("exponent too large"))?
            } else {
                1
            };
            Ok(Factor::Var { index, exp, pos })
        }
        Some(c) if c.is_ascii_digit() => {
            let num = BigInt::from_str(lx.digits().unwrap()).unwrap();
            let den = if lx.eat(b'/') {
                let d = lx.digits().ok_or_else(|| lx.err("expected denominator after `/`"))?;
                let d = BigInt::from_str(d).unwrap();
                if d.is_zero() {
                    return Err(lx.err("zero denominator"));
                }
                d
            } else {
                BigInt::one()
            };
            Ok(Factor::Coef(Rational::new(num, den)))
        }
        Some(_) => Err(lx.err("expected a number or a variable")),
        None => Err(lx.err("unexpected end of input")),
    }
}

/// Renders in ascending glex order, e.g. `1 - 2*x1 + x1^2`.
pub fn render_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        let is_const = m.degree() == 0;
        if !abs.is_one() || is_const {
            factors.push(abs.to_string());
        }
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(format!("x{}", i + 1)),
                _ => factors.push(format!("x{}^{}", i + 1, e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    n: usize,
    terms: Vec<TermJson>,
}

impl Serialize for SparsePoly<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyJson {
            n: self.dim(),
            terms: self
                .terms()
                .map(|(m, c)| TermJson {
                    exp: m.exponents().to_vec(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparsePoly<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = PolyJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let num = BigInt::from_str(&t.num).map_err(D::Error::custom)?;
            let den = BigInt::from_str(&t.den).map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            terms.push((Monomial::new(t.exp), Rational::new(num, den)));
        }
        Poly::from_terms(raw.n, terms).map_err(D::Error::custom)
    }
}

/// A polynomial given either as JSON object or as a text string.
#[derive(Deserialize)]
#[serde(untagged)]
pub enum PolySource {
    Json(Poly),
    Text(String),
}

impl PolySource {
    pub fn into_poly(self, n: usize) -> Result<Poly, ParseError> {
        match self {
            PolySource::Json(p) if p.dim() == n => Ok(p),
            PolySource::Json(p) => Err(ParseError::Syntax {
                pos: 0,
                msg: format!("polynomial has {} variables, expected {n}", p.dim()),
            }),
            PolySource::Text(t) => parse_poly(&t, Some(n)),
        }
    }
}
