//! Parsing, formatting and serde helpers for exact rationals.
//!
//! Rationals travel through JSON as strings (`"3/2"`, `"-4"`) so that no
//! precision is ever lost to a JSON number.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct RationalParseError(pub String);

/// Parses `int` or `int/int` (surrounding whitespace allowed).
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let t = text.trim();
    let err = || RationalParseError(text.to_string());
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `base^exp` by repeated squaring; exact for any size.
pub fn pow_rational(base: &Rational, mut exp: u64) -> Rational {
    let mut acc = Rational::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= &b;
        }
        exp >>= 1;
        if exp > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// `#[serde(with = "crate::rational::serde_str")]`
pub mod serde_str {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational};
    use crate::Rational;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = RawRational::deserialize(d)?;
        raw.into_rational().map_err(D::Error::custom)
    }

    /// Accepts `"3/2"` as well as plain JSON integers.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RawRational {
        Text(String),
        Int(i64),
    }

    impl RawRational {
        pub(crate) fn into_rational(self) -> Result<Rational, super::RationalParseError> {
            match self {
                RawRational::Text(t) => parse_rational(&t),
                RawRational::Int(v) => Ok(super::int(v)),
            }
        }
    }
}

/// Same as [`serde_str`] for `Vec<Rational>`.
pub mod serde_str_vec {
    use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    use super::format_rational;
    use super::serde_str::RawRational;
    use crate::Rational;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&format_rational(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<RawRational>::deserialize(d)?;
        raw.into_iter()
            .map(|r| r.into_rational().map_err(D::Error::custom))
            .collect()
    }
}
