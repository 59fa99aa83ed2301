//! Exact rational arithmetic helpers.
//!
//! Every cost, LP value and ratio in the crate is a [`Rational`]; floating
//! point never enters a comparison.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"2.375"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Invalid(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, fraction) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && fraction.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(fraction.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{fraction}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), fraction.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// A competitive ratio: an exact rational or `+inf` (positive cost against
/// a free proof).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ratio {
    Finite(Rational),
    Infinite,
}

impl Ratio {
    /// `num / den` with the conventions `0/0 = 1` and `x/0 = inf` for `x > 0`.
    pub fn of(num: &Rational, den: &Rational) -> Ratio {
        if den.is_zero() {
            if num.is_zero() {
                Ratio::Finite(Rational::one())
            } else {
                Ratio::Infinite
            }
        } else {
            Ratio::Finite(num / den)
        }
    }

    pub fn one() -> Ratio {
        Ratio::Finite(Rational::one())
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Ratio::Finite(r) => Some(r),
            Ratio::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Ratio::Infinite)
    }

    pub fn parse(text: &str) -> Result<Ratio> {
        match text.trim() {
            "inf" | "+inf" => Ok(Ratio::Infinite),
            other => parse_rational(other).map(Ratio::Finite),
        }
    }
}

impl From<Rational> for Ratio {
    fn from(r: Rational) -> Self {
        Ratio::Finite(r)
    }
}

impl PartialEq<Rational> for Ratio {
    fn eq(&self, other: &Rational) -> bool {
        matches!(self, Ratio::Finite(r) if r == other)
    }
}

impl PartialOrd<Rational> for Ratio {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(match self {
            Ratio::Finite(r) => r.cmp(other),
            Ratio::Infinite => Ordering::Greater,
        })
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Ratio::Finite(a), Ratio::Finite(b)) => a.cmp(b),
            (Ratio::Finite(_), Ratio::Infinite) => Ordering::Less,
            (Ratio::Infinite, Ratio::Finite(_)) => Ordering::Greater,
            (Ratio::Infinite, Ratio::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Finite(r) => write!(f, "{r}"),
            Ratio::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ratio::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a [`Rational`] as its `"p/q"` string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("2.375").unwrap(), frac(19, 8));
        assert_eq!(parse_rational("-0.5").unwrap(), frac(-1, 2));
        assert_eq!(parse_rational(".25").unwrap(), frac(1, 4));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn ratio_conventions() {
        assert_eq!(Ratio::of(&int(0), &int(0)), Ratio::one());
        assert_eq!(Ratio::of(&int(2), &int(0)), Ratio::Infinite);
        assert_eq!(Ratio::of(&int(3), &int(2)), Ratio::Finite(frac(3, 2)));
        assert!(Ratio::Infinite > Ratio::Finite(int(1_000_000)));
        assert_eq!(Ratio::parse("inf").unwrap().to_string(), "inf");
        assert_eq!(Ratio::parse("6/4").unwrap().to_string(), "3/2");
    }
}
