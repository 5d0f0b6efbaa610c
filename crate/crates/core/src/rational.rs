//! Exact rationals and their lossless `p/q` text form.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Always `p/q`, including integers (`3/1`), so every document field has one shape.
pub fn to_text(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Accepts `p/q` or a bare integer `p`.
pub fn from_text(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::invalid(format!("not a rational: {text:?}"));
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

pub fn ceil_to_u64(value: &Rational) -> u64 {
    let c = value.ceil().to_integer();
    if c.is_negative() {
        0
    } else {
        u64::try_from(c).unwrap_or(u64::MAX)
    }
}

pub fn is_integer(value: &Rational) -> bool {
    value.denom().is_one()
}

/// Ratio with the convention that 0/0 = 1 (used for degenerate empty games).
pub fn ratio_or_one(numer: &Rational, denom: &Rational) -> Rational {
    if denom.is_zero() {
        Rational::one()
    } else {
        numer / denom
    }
}

/// Serde adapter writing a rational as its `p/q` string.
pub mod text {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(
        value: &Rational,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_text(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        super::from_text(&raw).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a list of rationals as `p/q` strings.
pub mod text_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(
        values: &[Rational],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        values
            .iter()
            .map(super::to_text)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|t| super::from_text(t).map_err(serde::de::Error::custom))
            .collect()
    }
}
