//! The ramified quadratic extension `Q_p(π)`, `π² = p`.
//!
//! An element is `a + bπ` with `a, b ∈ Q_p`. Since `v(a) ∈ Z` and
//! `v(bπ) ∈ Z + 1/2` never tie, `v(a + bπ) = min(v(a), v(b) + 1/2)` exactly.

use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::number::{vp_rational, PadicNumber};
use crate::error::{Error, Result};
use crate::ext::{rat, ExtQ};

fn half_shift(v: ExtQ) -> ExtQ {
    &v + &ExtQ::frac(1, 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadPadic {
    /// Rational part `a`.
    #[serde(rename = "re")]
    pub a: PadicNumber,
    /// Coefficient `b` of `π`.
    #[serde(rename = "pi")]
    pub b: PadicNumber,
}

impl QuadPadic {
    pub fn new(a: PadicNumber, b: PadicNumber) -> Result<Self> {
        if a.p() != b.p() {
            return Err(Error::PrimeMismatch(a.p(), b.p()));
        }
        Ok(QuadPadic { a, b })
    }

    pub fn from_base(a: PadicNumber) -> Self {
        let b = PadicNumber::zero(a.p(), a.prec());
        QuadPadic { a, b }
    }

    /// The uniformizer `π`.
    pub fn pi(p: u64, prec: i64) -> Self {
        QuadPadic { a: PadicNumber::zero(p, prec), b: PadicNumber::one(p, prec) }
    }

    pub fn p(&self) -> u64 {
        self.a.p()
    }

    pub fn valuation(&self) -> ExtQ {
        self.a.valuation().min(half_shift(self.b.valuation()))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `a² − p b²`, the norm to `Q_p`.
    pub fn norm(&self) -> PadicNumber {
        let pb = &self.b * &self.b;
        &(&self.a * &self.a) - &pb.shift(1)
    }

    pub fn conj(&self) -> Self {
        QuadPadic { a: self.a.clone(), b: -&self.b }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        let n = other.norm();
        let num = self * &other.conj();
        Ok(QuadPadic { a: num.a.checked_div(&n)?, b: num.b.checked_div(&n)? })
    }

    pub fn lift(&self) -> QuadRational {
        QuadRational { p: self.p(), a: self.a.lift(), b: self.b.lift() }
    }
}

impl Add for &QuadPadic {
    type Output = QuadPadic;
    fn add(self, rhs: &QuadPadic) -> QuadPadic {
        QuadPadic { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Sub for &QuadPadic {
    type Output = QuadPadic;
    fn sub(self, rhs: &QuadPadic) -> QuadPadic {
        QuadPadic { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Neg for &QuadPadic {
    type Output = QuadPadic;
    fn neg(self) -> QuadPadic {
        QuadPadic { a: -&self.a, b: -&self.b }
    }
}

impl Mul for &QuadPadic {
    type Output = QuadPadic;
    fn mul(self, rhs: &QuadPadic) -> QuadPadic {
        let bd = &self.b * &rhs.b;
        QuadPadic {
            a: &(&self.a * &rhs.a) + &bd.shift(1),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.a),
        }
    }
}

/// Exact element `a + b√p` of `Q(√p)`, viewed inside `Q_p(π)` via `√p ↦ π`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadRational {
    pub p: u64,
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadRational {
    pub fn rational(p: u64, a: BigRational) -> Self {
        QuadRational { p, a, b: BigRational::zero() }
    }

    pub fn new(p: u64, a: BigRational, b: BigRational) -> Self {
        QuadRational { p, a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn valuation(&self) -> ExtQ {
        let va = vp_rational(&self.a, self.p).map(ExtQ::int).unwrap_or(ExtQ::PosInf);
        let vb = vp_rational(&self.b, self.p).map(ExtQ::int).unwrap_or(ExtQ::PosInf);
        va.min(half_shift(vb))
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadRational { p: self.p, a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadRational { p: self.p, a: &self.a - &o.a, b: &self.b - &o.b }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = rat(self.p as i64, 1);
        QuadRational {
            p: self.p,
            a: &self.a * &o.a + p * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }

    /// Inverse; `None` for zero (the norm of a non-zero element never vanishes
    /// because `p` is not a rational square).
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = &self.a * &self.a - rat(self.p as i64, 1) * &self.b * &self.b;
        Some(QuadRational { p: self.p, a: &self.a / &n, b: -&self.b / &n })
    }

    pub fn to_padic(&self, prec: i64) -> QuadPadic {
        QuadPadic {
            a: PadicNumber::from_rational(self.p, &self.a, prec),
            b: PadicNumber::from_rational(self.p, &self.b, prec),
        }
    }
}
