//! Extended rationals `Q ∪ {−∞, +∞}` used for valuations and log-radii.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A rational number or one of the two infinities.
///
/// Variant order gives the natural total order: `NegInf < Finite(_) < PosInf`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtQ {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl ExtQ {
    pub fn int(n: i64) -> Self {
        ExtQ::Finite(BigRational::from_integer(n.into()))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        ExtQ::Finite(rat(n, d))
    }

    pub fn zero() -> Self {
        ExtQ::Finite(BigRational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtQ::Finite(_))
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExtQ::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn into_finite(self) -> Option<BigRational> {
        match self {
            ExtQ::Finite(q) => Some(q),
            _ => None,
        }
    }

    /// Multiply by a non-negative rational; `0 · ±∞` is taken to be `0`
    /// (the convention for `i · ρ` at `i = 0` in seminorm formulas).
    pub fn scale(&self, k: &BigRational) -> ExtQ {
        assert!(!k.is_negative(), "ExtQ::scale expects a non-negative factor");
        if k.is_zero() {
            return ExtQ::zero();
        }
        match self {
            ExtQ::Finite(q) => ExtQ::Finite(q * k),
            other => other.clone(),
        }
    }
}

impl From<BigRational> for ExtQ {
    fn from(q: BigRational) -> Self {
        ExtQ::Finite(q)
    }
}

impl From<i64> for ExtQ {
    fn from(n: i64) -> Self {
        ExtQ::int(n)
    }
}

impl Add for &ExtQ {
    type Output = ExtQ;

    fn add(self, rhs: &ExtQ) -> ExtQ {
        match (self, rhs) {
            (ExtQ::Finite(a), ExtQ::Finite(b)) => ExtQ::Finite(a + b),
            (ExtQ::PosInf, ExtQ::NegInf) | (ExtQ::NegInf, ExtQ::PosInf) => {
                panic!("indeterminate sum of opposite infinities")
            }
            (ExtQ::PosInf, _) | (_, ExtQ::PosInf) => ExtQ::PosInf,
            _ => ExtQ::NegInf,
        }
    }
}

impl Add for ExtQ {
    type Output = ExtQ;

    fn add(self, rhs: ExtQ) -> ExtQ {
        &self + &rhs
    }
}

impl Neg for ExtQ {
    type Output = ExtQ;

    fn neg(self) -> ExtQ {
        match self {
            ExtQ::NegInf => ExtQ::PosInf,
            ExtQ::PosInf => ExtQ::NegInf,
            ExtQ::Finite(q) => ExtQ::Finite(-q),
        }
    }
}

impl PartialEq<BigRational> for ExtQ {
    fn eq(&self, other: &BigRational) -> bool {
        matches!(self, ExtQ::Finite(q) if q == other)
    }
}

impl PartialOrd<BigRational> for ExtQ {
    fn partial_cmp(&self, other: &BigRational) -> Option<Ordering> {
        Some(match self {
            ExtQ::NegInf => Ordering::Less,
            ExtQ::PosInf => Ordering::Greater,
            ExtQ::Finite(q) => q.cmp(other),
        })
    }
}

impl fmt::Display for ExtQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtQ::NegInf => write!(f, "-inf"),
            ExtQ::PosInf => write!(f, "inf"),
            ExtQ::Finite(q) => write!(f, "{q}"),
        }
    }
}

impl FromStr for ExtQ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" | "∞" => Ok(ExtQ::PosInf),
            "-inf" | "-∞" => Ok(ExtQ::NegInf),
            other => parse_rational(other).map(ExtQ::Finite),
        }
    }
}

impl Serialize for ExtQ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `n/d` as a `BigRational`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Parse `"a"`, `"-a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Smallest integer `>= q`.
pub fn ceil_int(q: &BigRational) -> BigInt {
    q.ceil().to_integer()
}

pub fn floor_int(q: &BigRational) -> BigInt {
    q.floor().to_integer()
}

/// Serde adapter for `BigRational` fields written as `"a/b"` strings.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_puts_infinities_at_the_ends() {
        let mut v = vec![ExtQ::PosInf, ExtQ::frac(1, 2), ExtQ::NegInf, ExtQ::int(-3)];
        v.sort();
        assert_eq!(v, vec![ExtQ::NegInf, ExtQ::int(-3), ExtQ::frac(1, 2), ExtQ::PosInf]);
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["inf", "-inf", "9/4", "-7", "0"] {
            let x: ExtQ = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
        assert!("1/0".parse::<ExtQ>().is_err());
        assert!("abc".parse::<ExtQ>().is_err());
    }

    #[test]
    fn scale_by_zero_is_zero_even_at_infinity() {
        assert_eq!(ExtQ::PosInf.scale(&rat(0, 1)), ExtQ::zero());
        assert_eq!(ExtQ::PosInf.scale(&rat(2, 1)), ExtQ::PosInf);
    }
}
