//! Factorial valuations and binomial coefficients with rational top argument.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::number::PadicNumber;
use crate::error::{Error, Result};

/// `v_p(k!)` by Legendre's formula.
pub fn vp_factorial(k: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut q = k;
    while q > 0 {
        q /= p;
        total += q;
    }
    total
}

/// Sum of the base-`p` digits of `k`; `v_p(k!) = (k − s_p(k))/(p − 1)`.
pub fn digit_sum(k: u64, p: u64) -> u64 {
    let mut s = 0;
    let mut q = k;
    while q > 0 {
        s += q % p;
        q /= p;
    }
    s
}

/// The exact rational `C(m, k) = m(m−1)…(m−k+1)/k!`.
pub fn binom_rational(m: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= m - BigRational::from_integer(BigInt::from(i));
        acc /= BigRational::from_integer(BigInt::from(i + 1));
    }
    acc
}

/// `C(m, k)` as a p-adic number at absolute precision `prec`.
///
/// The coefficient is computed exactly over `Q` and then embedded, so the
/// only failure is a non-zero coefficient whose valuation is at or beyond
/// `prec`: its leading digit would not be certified.
pub fn binom_fractional(m: &BigRational, k: u64, p: u64, prec: i64) -> Result<PadicNumber> {
    let c = binom_rational(m, k);
    let x = PadicNumber::from_rational(p, &c, prec);
    if x.is_zero() && !c.is_zero() {
        return Err(Error::precision(format!("binomial coefficient C({m}, {k})"), "more than the coefficient valuation", prec));
    }
    Ok(x)
}
