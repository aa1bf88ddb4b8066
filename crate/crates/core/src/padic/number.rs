//! Elements of `Q_p` known modulo `p^N` (absolute precision `N`).
//!
//! A non-zero element is stored as `p^val · unit` with `unit` an integer in
//! `[1, p^(N - val))` prime to `p`. An element whose known digits are all zero
//! is "zero at precision `N`" and has valuation `+∞` as far as this model can
//! tell. Arithmetic propagates absolute precision exactly the way the digits
//! do, so no operation ever invents digits.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{parse_rational, ExtQ};

/// `p^k` as a big integer.
pub fn ppow(p: u64, k: u64) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// `v_p(n)` for non-zero `n`, together with `n / p^v`.
pub fn split_valuation(n: &BigInt, p: u64) -> (i64, BigInt) {
    assert!(!n.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    (v, m)
}

/// `v_p(n)` for an integer, `None` for zero.
pub fn vp_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        None
    } else {
        Some(split_valuation(n, p).0)
    }
}

/// `v_p(q)` for a rational, `None` for zero.
pub fn vp_rational(q: &BigRational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(split_valuation(q.numer(), p).0 - split_valuation(q.denom(), p).0)
}

/// Inverse of `a` modulo `m`; `a` must be a unit mod `m`.
pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let g = a.extended_gcd(m);
    assert!(g.gcd.is_one(), "mod_inverse of a non-unit");
    g.x.mod_floor(m)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicNumber {
    p: u64,
    val: Option<i64>,
    unit: BigInt,
    prec: i64,
}

impl PadicNumber {
    pub fn zero(p: u64, prec: i64) -> Self {
        PadicNumber { p, val: None, unit: BigInt::zero(), prec }
    }

    pub fn one(p: u64, prec: i64) -> Self {
        Self::from_int(p, 1, prec)
    }

    pub fn from_int(p: u64, n: i64, prec: i64) -> Self {
        Self::from_bigint(p, &BigInt::from(n), prec)
    }

    pub fn from_bigint(p: u64, n: &BigInt, prec: i64) -> Self {
        Self::normalize(p, 0, n.clone(), prec)
    }

    /// The image of an exact rational, known to absolute precision `prec`.
    pub fn from_rational(p: u64, q: &BigRational, prec: i64) -> Self {
        if q.is_zero() {
            return Self::zero(p, prec);
        }
        let (vn, un) = split_valuation(q.numer(), p);
        let (vd, ud) = split_valuation(q.denom(), p);
        let val = vn - vd;
        if val >= prec {
            return Self::zero(p, prec);
        }
        let modulus = ppow(p, (prec - val) as u64);
        let unit = (un * mod_inverse(&ud, &modulus)).mod_floor(&modulus);
        PadicNumber { p, val: Some(val), unit, prec }
    }

    /// `p^k` known to absolute precision `prec`.
    pub fn p_power(p: u64, k: i64, prec: i64) -> Self {
        if k >= prec {
            return Self::zero(p, prec);
        }
        PadicNumber { p, val: Some(k), unit: BigInt::one(), prec }
    }

    /// Build from serialized parts, validating the invariants.
    pub fn from_parts(p: u64, val: Option<i64>, unit: BigInt, prec: i64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        match val {
            None => {
                if !unit.is_zero() {
                    return Err(Error::invalid("zero element must have unit 0"));
                }
                Ok(Self::zero(p, prec))
            }
            Some(v) => {
                if v >= prec {
                    return Err(Error::invalid(format!("valuation {v} not below precision {prec}")));
                }
                if unit.is_negative() || (&unit % p).is_zero() {
                    return Err(Error::invalid("unit part must be positive and prime to p"));
                }
                let modulus = ppow(p, (prec - v) as u64);
                if unit >= modulus {
                    return Err(Error::invalid("unit part exceeds p^(prec - val)"));
                }
                Ok(PadicNumber { p, val: Some(v), unit, prec })
            }
        }
    }

    fn normalize(p: u64, base: i64, s: BigInt, prec: i64) -> Self {
        if prec <= base {
            return Self::zero(p, prec);
        }
        let modulus = ppow(p, (prec - base) as u64);
        let s = s.mod_floor(&modulus);
        if s.is_zero() {
            return Self::zero(p, prec);
        }
        let (t, unit) = split_valuation(&s, p);
        PadicNumber { p, val: Some(base + t), unit, prec }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Absolute precision: the element is known modulo `p^prec`.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Integer valuation, `None` when zero at precision.
    pub fn val(&self) -> Option<i64> {
        self.val
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// `v(x)` as an extended rational; `+∞` when zero at precision.
    pub fn valuation(&self) -> ExtQ {
        match self.val {
            Some(v) => ExtQ::int(v),
            None => ExtQ::PosInf,
        }
    }

    /// Lower bound on the true valuation: `val` if known, else `prec`.
    pub fn val_lower_bound(&self) -> i64 {
        self.val.unwrap_or(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.val.is_none()
    }

    pub fn relative_precision(&self) -> i64 {
        match self.val {
            Some(v) => self.prec - v,
            None => 0,
        }
    }

    /// Forget digits at and beyond `p^prec` (no-op if already coarser).
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        match self.val {
            None => Self::zero(self.p, prec),
            Some(v) => Self::normalize(self.p, v, self.unit.clone(), prec),
        }
    }

    /// The exact rational `p^val · unit` represented by the stored digits.
    pub fn lift(&self) -> BigRational {
        match self.val {
            None => BigRational::zero(),
            Some(v) => {
                let u = BigRational::from_integer(self.unit.clone());
                if v >= 0 {
                    u * BigRational::from_integer(ppow(self.p, v as u64))
                } else {
                    u / BigRational::from_integer(ppow(self.p, (-v) as u64))
                }
            }
        }
    }

    /// Canonical representative of a `Z_p` element modulo `p^n`, in `[0, p^n)`.
    pub fn residue(&self, n: u32) -> Result<BigInt> {
        if self.prec < n as i64 {
            return Err(Error::precision("residue mod p^n", n, self.prec));
        }
        match self.val {
            None => Ok(BigInt::zero()),
            Some(v) if v < 0 => Err(Error::invalid("element is not in Z_p")),
            Some(v) => {
                let modulus = ppow(self.p, n as u64);
                Ok((&self.unit * ppow(self.p, v as u64)).mod_floor(&modulus))
            }
        }
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "p-adic numbers over different primes");
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(self + other)
    }

    /// `self / other`; fails when `other` is zero at its precision.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        let vy = other.val.ok_or(Error::DivisionByZero(other.prec))?;
        let p = self.p;
        match self.val {
            None => Ok(Self::zero(p, self.prec - vy)),
            Some(vx) => {
                let rel = (self.prec - vx).min(other.prec - vy);
                let modulus = ppow(p, rel as u64);
                let unit = (&self.unit * mod_inverse(&other.unit, &modulus)).mod_floor(&modulus);
                Ok(Self::normalize(p, vx - vy, unit, vx - vy + rel))
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let v = self.val.ok_or(Error::DivisionByZero(self.prec))?;
        let rel = self.prec - v;
        let modulus = ppow(self.p, rel as u64);
        let unit = mod_inverse(&self.unit, &modulus);
        Ok(PadicNumber { p: self.p, val: Some(-v), unit, prec: rel - v })
    }

    /// Integer power; negative exponents require a non-zero base.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc: Option<Self> = None;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => &a * &sq,
                });
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc.unwrap_or_else(|| {
            // x^0 = 1 exactly; keep the precision of the base's relative digits.
            Self::one(self.p, self.relative_precision().max(1))
        }))
    }

    /// Multiply by `p^k` (exact shift, precision moves with it).
    pub fn shift(&self, k: i64) -> Self {
        PadicNumber {
            p: self.p,
            val: self.val.map(|v| v + k),
            unit: self.unit.clone(),
            prec: self.prec + k,
        }
    }

    /// True when `self - other` is zero at the common precision.
    pub fn eq_at_precision(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    /// Base-`p` digits `d_i` of the stored value, so `x = Σ d_i p^(val+i)`.
    pub fn digits(&self) -> Vec<u64> {
        let mut out = Vec::new();
        if let Some(v) = self.val {
            let pb = BigInt::from(self.p);
            let mut u = self.unit.clone();
            for _ in 0..(self.prec - v) {
                let (q, r) = u.div_rem(&pb);
                out.push(r.try_into().unwrap_or(0));
                u = q;
            }
        }
        out
    }

    /// Digit string such as `2 + p + 2*p^3`, without the `O(p^N)` term.
    pub fn digit_string(&self) -> String {
        let Some(v) = self.val else {
            return "0".to_string();
        };
        let terms: Vec<String> = self
            .digits()
            .into_iter()
            .enumerate()
            .filter(|(_, d)| *d != 0)
            .map(|(i, d)| monomial(d, v + i as i64))
            .collect();
        terms.join(" + ")
    }
}

fn monomial(d: u64, k: i64) -> String {
    let pk = match k {
        0 => String::new(),
        1 => "p".to_string(),
        _ => format!("p^{k}"),
    };
    match (d, pk.is_empty()) {
        (_, true) => d.to_string(),
        (1, false) => pk,
        (_, false) => format!("{d}*{pk}"),
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "O(p^{})", self.prec)
        } else {
            write!(f, "{} + O(p^{})", self.digit_string(), self.prec)
        }
    }
}

impl Add for &PadicNumber {
    type Output = PadicNumber;

    fn add(self, rhs: &PadicNumber) -> PadicNumber {
        self.check_prime(rhs);
        let prec = self.prec.min(rhs.prec);
        let p = self.p;
        match (self.val, rhs.val) {
            (None, None) => PadicNumber::zero(p, prec),
            (None, Some(v)) => PadicNumber::normalize(p, v, rhs.unit.clone(), prec),
            (Some(v), None) => PadicNumber::normalize(p, v, self.unit.clone(), prec),
            (Some(vx), Some(vy)) => {
                let base = vx.min(vy);
                let s = &self.unit * ppow(p, (vx - base) as u64) + &rhs.unit * ppow(p, (vy - base) as u64);
                PadicNumber::normalize(p, base, s, prec)
            }
        }
    }
}

impl Neg for &PadicNumber {
    type Output = PadicNumber;

    fn neg(self) -> PadicNumber {
        match self.val {
            None => self.clone(),
            Some(v) => PadicNumber::normalize(self.p, v, -self.unit.clone(), self.prec),
        }
    }
}

impl Sub for &PadicNumber {
    type Output = PadicNumber;

    fn sub(self, rhs: &PadicNumber) -> PadicNumber {
        self + &(-rhs)
    }
}

impl Mul for &PadicNumber {
    type Output = PadicNumber;

    fn mul(self, rhs: &PadicNumber) -> PadicNumber {
        self.check_prime(rhs);
        let p = self.p;
        let prec = (self.prec + rhs.val_lower_bound()).min(rhs.prec + self.val_lower_bound());
        match (self.val, rhs.val) {
            (Some(vx), Some(vy)) => PadicNumber::normalize(p, vx + vy, &self.unit * &rhs.unit, prec),
            _ => PadicNumber::zero(p, prec),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: PadicNumber) -> PadicNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Wire form: `{"p": int, "val": "a/b" | "inf", "unit": decimal-string, "prec": int}`.
#[derive(Serialize, Deserialize)]
struct PadicRepr {
    p: u64,
    val: String,
    unit: String,
    prec: i64,
}

impl Serialize for PadicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PadicRepr {
            p: self.p,
            val: self.valuation().to_string(),
            unit: self.unit.to_string(),
            prec: self.prec,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PadicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = PadicRepr::deserialize(d)?;
        let val = match r.val.trim() {
            "inf" => None,
            s => {
                let q = parse_rational(s).map_err(D::Error::custom)?;
                if !q.is_integer() {
                    return Err(D::Error::custom("Q_p valuations are integers"));
                }
                Some(i64::try_from(q.to_integer()).map_err(D::Error::custom)?)
            }
        };
        let unit: BigInt = r.unit.parse().map_err(D::Error::custom)?;
        PadicNumber::from_parts(r.p, val, unit, r.prec).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::rat;

    #[test]
    fn valuation_of_p_and_one() {
        assert_eq!(PadicNumber::from_int(5, 5, 20).valuation(), ExtQ::int(1));
        assert_eq!(PadicNumber::one(5, 20).valuation(), ExtQ::int(0));
        assert_eq!(PadicNumber::zero(5, 20).valuation(), ExtQ::PosInf);
    }

    #[test]
    fn rational_embedding_is_exact_mod_p_n() {
        let x = PadicNumber::from_rational(3, &rat(1, 2), 10);
        let two = PadicNumber::from_int(3, 2, 10);
        assert!((&(&x * &two) - &PadicNumber::one(3, 10)).is_zero());
        let y = PadicNumber::from_rational(3, &rat(5, 9), 10);
        assert_eq!(y.val(), Some(-2));
        assert_eq!(y.prec(), 10);
    }

    #[test]
    fn negative_one_digits() {
        let m = PadicNumber::from_int(3, -1, 3);
        assert_eq!(m.digits(), vec![2, 2, 2]);
        assert_eq!(m.residue(2).unwrap(), BigInt::from(8));
    }

    #[test]
    fn precision_tracks_multiplication() {
        let a = PadicNumber::from_int(2, 4, 10); // 2^2, rel prec 8
        let b = PadicNumber::from_int(2, 3, 6);
        let c = &a * &b;
        assert_eq!(c.val(), Some(2));
        assert_eq!(c.prec(), 8); // min(10 + 0, 6 + 2)
    }

    #[test]
    fn division_keeps_relative_precision() {
        let a = PadicNumber::from_int(5, 1, 10);
        let b = PadicNumber::from_int(5, 25, 10);
        let c = a.checked_div(&b).unwrap();
        assert_eq!(c.val(), Some(-2));
        assert_eq!(c.relative_precision(), 8);
        assert!(PadicNumber::one(5, 4).checked_div(&PadicNumber::zero(5, 4)).is_err());
    }

    #[test]
    fn cancellation_loses_digits_honestly() {
        let a = PadicNumber::from_int(3, 1 + 81, 4);
        let b = PadicNumber::one(3, 10);
        assert!((&a - &b).is_zero());
        assert_eq!((&a - &b).prec(), 4);
    }

    #[test]
    fn display_uses_symbolic_p() {
        let x = PadicNumber::from_int(3, 3, 11);
        assert_eq!(x.to_string(), "p + O(p^11)");
        let y = PadicNumber::from_int(5, 2 + 5 + 2 * 125, 6);
        assert_eq!(y.to_string(), "2 + p + 2*p^3 + O(p^6)");
        assert_eq!(PadicNumber::zero(2, 7).to_string(), "O(p^7)");
    }

    #[test]
    fn serde_round_trip_and_validation() {
        let x = PadicNumber::from_rational(7, &rat(-3, 49), 12);
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.contains("\"val\":\"-2\""));
        let y: PadicNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        let bad = r#"{"p":7,"val":"0","unit":"14","prec":3}"#;
        assert!(serde_json::from_str::<PadicNumber>(bad).is_err());
    }

    #[test]
    fn powers_and_inverses() {
        let x = PadicNumber::from_rational(3, &rat(2, 3), 20);
        let y = x.pow(-3).unwrap();
        let z = x.pow(3).unwrap();
        assert!((&(&y * &z) - &PadicNumber::one(3, 20)).is_zero());
        assert_eq!(y.val(), Some(3));
    }
}
