//! The differential `δ(c) = c(e'_0) dx/x + Σ_{j≥1} c(e_j)(dx/(x − q^j) − dx/x)
//! + Σ_{j≤0} c(e_j) dx/(x − q^j)` and the Möbius identity `δ(c_n)(1) = q^n dx`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::current::{moebius_current, moebius_current_upto, Current, Ring};
use super::TateCurve;
use crate::error::{Error, Result};
use crate::ext::ExtQ;
use crate::padic::{vp_int, PadicNumber};

/// Coefficient of `dx` at a point.
#[derive(Debug, Clone, PartialEq)]
pub enum DeltaValue {
    /// `value` is the truncated sum; the discarded tail has valuation `≥ err_val`.
    Value { value: PadicNumber, err_val: ExtQ },
    /// The point is a cusp with non-zero value: `ord = −1`.
    Pole,
}

impl DeltaValue {
    pub fn value(&self) -> Option<&PadicNumber> {
        match self {
            DeltaValue::Value { value, .. } => Some(value),
            DeltaValue::Pole => None,
        }
    }
}

fn ring_value(c: &Current, v: &BigInt, p: u64, prec: i64) -> Result<PadicNumber> {
    match c.ring() {
        Ring::Z => Ok(PadicNumber::from_bigint(p, v, prec)),
        Ring::Zp { p: rp, prec: rprec } => {
            if *rp != p {
                return Err(Error::PrimeMismatch(p, *rp));
            }
            Ok(PadicNumber::from_bigint(p, v, prec.min(*rprec as i64)))
        }
        Ring::ZmodN(_) => Err(Error::invalid("δ needs a current over Z or Z_p")),
    }
}

/// `δ(c)/dx` at `z`. Window-supported currents give a finite sum; periodic
/// ones are truncated to `|j| ≤ big_j` with a tail bound.
pub fn delta_eval(c: &Current, tc: &TateCurve, z: &PadicNumber, big_j: u64) -> Result<DeltaValue> {
    c.validate()?;
    let p = tc.p();
    let prec = tc.prec().min(z.prec());
    let vz = z.val().ok_or_else(|| Error::invalid("δ is evaluated on G_m, z = 0 given"))?;
    let (lo, hi) = match c.period() {
        None => c.window(),
        Some(_) => (-(big_j as i64), big_j as i64),
    };
    for j in lo..=hi {
        if !c.cusp(j).is_zero() && (z - &tc.q_pow(j)).is_zero() {
            return Ok(DeltaValue::Pole);
        }
    }
    let mut acc = ring_value(c, &c.spine(0), p, prec)?.checked_div(z)?;
    for j in lo..=hi {
        let cj = c.cusp(j);
        if cj.is_zero() {
            continue;
        }
        let cj = ring_value(c, &cj, p, prec)?;
        let qj = tc.q_pow(j);
        let d = z - &qj;
        let term = if j >= 1 {
            // 1/(z − q^j) − 1/z = q^j/(z(z − q^j))
            (&cj * &qj).checked_div(&(z * &d))?
        } else {
            cj.checked_div(&d)?
        };
        acc = &acc + &term;
    }
    let err_val = match c.period() {
        None => ExtQ::PosInf,
        Some(_) => {
            let t = big_j as i64 + 1;
            let vq = tc.vq();
            if t * vq <= vz || -t * vq >= vz {
                return Err(Error::TailNotCertified(format!("window {big_j} does not separate z from the q^j")));
            }
            // j > J: v ≥ j v(q) − 2 v(z); j < −J: v ≥ |j| v(q).
            ExtQ::int((t * vq - 2 * vz).min(t * vq))
        }
    };
    if let ExtQ::Finite(e) = &err_val {
        let e: i64 = crate::ext::floor_int(e).try_into().unwrap_or(i64::MAX);
        acc = acc.truncate(e);
    }
    Ok(DeltaValue::Value { value: acc, err_val })
}

/// `Σ_{j≤J} μ(j) q^{jn}/(1 − q^{jn})`, which equals `q^n` up to valuation
/// `n(J+1)v(q)`. The result is truncated to that precision.
pub fn delta_at_one(n: u64, tc: &TateCurve, big_j: u64) -> Result<(PadicNumber, i64)> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let err = n as i64 * (big_j as i64 + 1) * tc.vq();
    let one = PadicNumber::one(tc.p(), tc.prec());
    let c = moebius_current(n, big_j);
    match delta_eval(&c, tc, &one, big_j)? {
        DeltaValue::Value { value, .. } => Ok((value.truncate(err), err)),
        DeltaValue::Pole => unreachable!("1 is never a power of q"),
    }
}

/// Result of evaluating `δ(c_P)(1)` for a polynomial `P`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyEval {
    pub value: PadicNumber,
    /// `P(q)`, computed directly.
    pub target: PadicNumber,
    /// `δ(c_P)(1) − P(q)` has valuation at least this.
    pub err_val: i64,
}

/// `c_P = a_0 c_0 + Σ_{n≥1} a_n c_n` with every `c_n` cut after cusp index
/// `J·max(1, deg P)`, evaluated at 1.
pub fn poly_current_eval(coeffs: &[BigInt], tc: &TateCurve, big_j: u64) -> Result<PolyEval> {
    let p = tc.p();
    let prec = tc.prec();
    let deg = coeffs.len().saturating_sub(1).max(1) as i64;
    let w = big_j as i64 * deg;
    let mut cp = Current::zero(Ring::Z);
    let mut err = i64::MAX;
    for (n, a) in coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let cn = if n == 0 { Current::c0(Ring::Z) } else { moebius_current_upto(n as u64, w) };
        cp = cp.add(&cn.scale(a))?;
        if n >= 1 {
            // First omitted cusp index of c_n is n(⌊w/n⌋ + 1).
            let omitted = n as i64 * (w / n as i64 + 1);
            err = err.min(vp_int(a, p).unwrap_or(0) + omitted * tc.vq());
        }
    }
    let err = err.min(prec);
    let one = PadicNumber::one(p, prec);
    let value = match delta_eval(&cp, tc, &one, big_j)? {
        DeltaValue::Value { value, .. } => value.truncate(err),
        DeltaValue::Pole => unreachable!("1 is never a power of q"),
    };
    let mut target = PadicNumber::zero(p, prec);
    for (n, a) in coeffs.iter().enumerate() {
        target = &target + &(&PadicNumber::from_bigint(p, a, prec) * &tc.q_pow(n as i64));
    }
    Ok(PolyEval { value, target: target.truncate(err), err_val: err })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tc(p: u64, k: i64, prec: i64) -> TateCurve {
        TateCurve::new(PadicNumber::p_power(p, k, prec)).unwrap()
    }

    #[test]
    fn c0_gives_dx_at_one() {
        let t = tc(3, 1, 40);
        let one = PadicNumber::one(3, 40);
        let d = delta_eval(&Current::c0(Ring::Z), &t, &one, 5).unwrap();
        assert_eq!(d.value(), Some(&one));
        let d = delta_eval(&Current::zero(Ring::Z), &t, &PadicNumber::from_int(3, 2, 40), 5).unwrap();
        assert!(d.value().unwrap().is_zero());
    }

    #[test]
    fn moebius_identity_example() {
        let t = tc(3, 1, 40);
        let (v, err) = delta_at_one(1, &t, 10).unwrap();
        assert_eq!(err, 11);
        assert_eq!(v.to_string(), "p + O(p^11)");
        let t = tc(5, 1, 40);
        let (v, err) = delta_at_one(2, &t, 2).unwrap();
        assert_eq!(err, 6);
        assert!((&v - &t.q_pow(2)).is_zero());
        let (v, err) = delta_at_one(3, &t, 0).unwrap();
        assert_eq!((v.is_zero(), err), (true, 3));
    }

    #[test]
    fn pole_marker() {
        let t = tc(3, 1, 40);
        let c = moebius_current(1, 3);
        assert_eq!(delta_eval(&c, &t, &t.q_pow(2), 3).unwrap(), DeltaValue::Pole);
        // μ(4) = 0: q^4 is not a pole.
        assert!(delta_eval(&c, &t, &t.q_pow(4), 3).unwrap().value().is_some());
    }

    #[test]
    fn polynomials() {
        let t = tc(5, 1, 60);
        for coeffs in [vec![0, 1], vec![1], vec![0, -1, 1], vec![3, 0, 2, 7]] {
            let coeffs: Vec<BigInt> = coeffs.into_iter().map(BigInt::from).collect();
            let r = poly_current_eval(&coeffs, &t, 6).unwrap();
            assert!((&r.value - &r.target).is_zero(), "{coeffs:?}");
        }
    }
}
