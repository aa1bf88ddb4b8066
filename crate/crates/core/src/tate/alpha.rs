//! The function `α(c)` attached to an integer current, and its inverse read
//! off from seminorm slopes.
//!
//! For a window-supported current,
//! `α(c) = x^{c(e'_0)} Π_{j≥1} ((x − q^j)/x)^{c(e_j)} Π_{j≤0} ((x − q^j)/q^j)^{c(e_j)}`.
//! Periodic currents use `(1 − x/q^j)` for `j ≤ 0`, which changes `α` only by a
//! sign and makes the infinite product converge.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::current::{Current, Ring};
use super::TateCurve;
use crate::berkovich::{seminorm, BallPoint, EvalPoint, PointValue, Polynomial};
use crate::error::{Error, Result};
use crate::ext::{rat, ExtQ};
use crate::padic::PadicNumber;

/// A root (or pole) of a factored function.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Root {
    /// `q^j`.
    QPower(i64),
    Value(PadicNumber),
}

/// `x^m · Π (x − r)^{k_r}`, defined up to a non-zero scalar.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactoredFunction {
    pub spine_exponent: i64,
    pub factors: Vec<(Root, i64)>,
}

impl FactoredFunction {
    pub fn new(spine_exponent: i64, factors: Vec<(Root, i64)>) -> Self {
        FactoredFunction { spine_exponent, factors }
    }

    pub fn constant() -> Self {
        FactoredFunction { spine_exponent: 0, factors: Vec::new() }
    }

    pub fn root_value(&self, r: &Root, tc: &TateCurve) -> PadicNumber {
        match r {
            Root::QPower(j) => tc.q_pow(*j),
            Root::Value(a) => a.clone(),
        }
    }

    /// `z^m Π (z − r)^k`.
    pub fn eval(&self, tc: &TateCurve, z: &PadicNumber) -> Result<PadicNumber> {
        if z.is_zero() && self.spine_exponent != 0 {
            return Err(Error::PoleCollision("z = 0".into()));
        }
        let mut acc = z.pow(self.spine_exponent)?;
        for (r, k) in &self.factors {
            if *k == 0 {
                continue;
            }
            let d = z - &self.root_value(r, tc);
            if d.is_zero() {
                return Err(Error::PoleCollision(format!("z meets the root {r:?}")));
            }
            acc = &acc * &d.pow(*k)?;
        }
        Ok(acc)
    }

    /// `−log_p |f|_b`.
    pub fn lognorm(&self, tc: &TateCurve, b: &BallPoint) -> Result<ExtQ> {
        let p = tc.p();
        let x = Polynomial::linear(&PadicNumber::zero(p, b.center().prec()));
        let mut total = seminorm(&x, b).map_err(collision)?.scale_int(self.spine_exponent)?;
        for (r, k) in &self.factors {
            let v = seminorm(&Polynomial::linear(&self.root_value(r, tc)), b).map_err(collision)?;
            total = &total + &v.scale_int(*k)?;
        }
        Ok(total)
    }
}

fn collision(e: Error) -> Error {
    match e {
        Error::PrecisionExhausted { context, .. } if context.contains("type-1") => {
            Error::PoleCollision("type-1 point on a zero or pole".into())
        }
        e => e,
    }
}

trait ScaleInt {
    fn scale_int(&self, k: i64) -> Result<ExtQ>;
}

impl ScaleInt for ExtQ {
    /// `k·v` for a finite `v`; infinite `v` with `k ≠ 0` is a zero or pole.
    fn scale_int(&self, k: i64) -> Result<ExtQ> {
        match self {
            ExtQ::Finite(v) => Ok(ExtQ::Finite(v * rat(k, 1))),
            _ if k == 0 => Ok(ExtQ::zero()),
            _ => Err(Error::PoleCollision("evaluation at a zero or pole".into())),
        }
    }
}

/// Value of `α(c)` and a lower bound on the valuation of the relative error
/// (`+∞` when nothing was truncated).
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaValue {
    pub value: PointValue,
    pub err_val: ExtQ,
}

fn integer_values(c: &Current) -> Result<()> {
    if *c.ring() != Ring::Z {
        return Err(Error::invalid("α is defined on integer currents"));
    }
    Ok(())
}

fn small(v: &BigInt) -> Result<i64> {
    v.to_i64().ok_or_else(|| Error::invalid("current value does not fit in i64"))
}

/// `α(c)` at a point or ball. Window-supported currents give the exact
/// product; periodic ones are truncated to `|j| ≤ big_j`.
pub fn alpha_eval(c: &Current, tc: &TateCurve, z: &EvalPoint, big_j: u64) -> Result<AlphaValue> {
    integer_values(c)?;
    c.validate()?;
    let vq = tc.vq();
    let s0 = small(&c.spine(0))?;
    let (lo, hi, tail) = match c.period() {
        None => {
            let (a, b) = c.window();
            (a, b, None)
        }
        Some(_) => (-(big_j as i64), big_j as i64, Some(big_j as i64)),
    };
    match z {
        EvalPoint::Value(z) => {
            let vz = z.val().ok_or_else(|| Error::PoleCollision("z = 0".into()))?;
            let mut acc = z.pow(s0)?;
            for j in lo..=hi {
                let cj = small(&c.cusp(j))?;
                if cj == 0 {
                    continue;
                }
                let qj = tc.q_pow(j);
                let d = z - &qj;
                if d.is_zero() {
                    return Err(Error::PoleCollision(format!("z = q^{j}")));
                }
                let factor = match (tail.is_some(), j >= 1) {
                    (_, true) => d.checked_div(z)?,
                    (false, false) => d.checked_div(&qj)?,
                    (true, false) => (-&d).checked_div(&qj)?,
                };
                acc = &acc * &factor.pow(cj)?;
            }
            let err_val = match tail {
                None => ExtQ::PosInf,
                Some(t) => {
                    let e = (t + 1) * vq - vz.abs();
                    if e <= 0 {
                        return Err(Error::TailNotCertified(format!("window {t} too small for v(z) = {vz}")));
                    }
                    ExtQ::int(e)
                }
            };
            Ok(AlphaValue { value: PointValue::Value(acc), err_val })
        }
        EvalPoint::Ball(b) => {
            let p = tc.p();
            let x = seminorm(&Polynomial::linear(&PadicNumber::zero(p, b.center().prec())), b)?;
            let vx = x.finite().cloned().ok_or_else(|| Error::PoleCollision("type-1 point at 0".into()))?;
            let mut total = &vx * &rat(s0, 1);
            for j in lo..=hi {
                let cj = small(&c.cusp(j))?;
                if cj == 0 {
                    continue;
                }
                let v = seminorm(&Polynomial::linear(&tc.q_pow(j)), b).map_err(collision)?;
                let v = v.finite().cloned().ok_or_else(|| Error::PoleCollision(format!("type-1 point at q^{j}")))?;
                let denom = if j >= 1 { vx.clone() } else { rat(j * vq, 1) };
                total += (v - denom) * rat(cj, 1);
            }
            if let Some(t) = tail {
                // Tail factors are 1 + (something of positive valuation): norm 1.
                let ok_hi = rat((t + 1) * vq, 1) > vx;
                let ok_lo = &vx + rat((t + 1) * vq, 1) > BigRational::zero();
                if !(ok_hi && ok_lo) {
                    return Err(Error::TailNotCertified(format!("window {t} does not reach the ball")));
                }
            }
            Ok(AlphaValue { value: PointValue::LogNorm(ExtQ::Finite(total)), err_val: ExtQ::PosInf })
        }
    }
}

/// `α(c)` of a window-supported integer current as `x^m Π (x − q^j)^{c(e_j)}`.
pub fn factored_alpha(c: &Current) -> Result<FactoredFunction> {
    integer_values(c)?;
    if c.period().is_some() {
        return Err(Error::invalid("factored form needs a window-supported current"));
    }
    c.validate()?;
    let mut m = small(&c.spine(0))?;
    let mut factors = Vec::new();
    for (j, v) in c.cusp_support() {
        let k = small(v)?;
        if j >= 1 {
            m -= k;
        }
        factors.push((Root::QPower(j), k));
    }
    Ok(FactoredFunction { spine_exponent: m, factors })
}

/// Slope `(N(ρ2) − N(ρ1))/(ρ2 − ρ1)` of the log-norm along a ray.
fn slope(f: &FactoredFunction, tc: &TateCurve, center: &PadicNumber, r1: &BigRational, r2: &BigRational) -> Result<i64> {
    let n1 = f.lognorm(tc, &BallPoint::new(center.clone(), ExtQ::Finite(r1.clone()))?)?;
    let n2 = f.lognorm(tc, &BallPoint::new(center.clone(), ExtQ::Finite(r2.clone()))?)?;
    let (ExtQ::Finite(a), ExtQ::Finite(b)) = (n1, n2) else {
        return Err(Error::PoleCollision("infinite log-norm on an annulus".into()));
    };
    let s = (b - a) / (r2 - r1);
    if !s.is_integer() {
        return Err(Error::invalid(format!("non-integral slope {s}")));
    }
    small(&s.to_integer())
}

/// Inverse of `α`: the current whose function is `f` up to a scalar.
///
/// Spine values come from the slopes `m_j` of `f` on the annuli
/// `|q^{j+1}| < |x| < |q^j|` via `c(e'_j) = 2m_0 − m_j`, and cusp values from
/// the slopes on the punctured disks around `q^j`.
pub fn current_from_slopes(f: &FactoredFunction, tc: &TateCurve) -> Result<Current> {
    let mut js = Vec::new();
    for (r, k) in &f.factors {
        match r {
            Root::QPower(j) => {
                if js.contains(j) {
                    return Err(Error::invalid(format!("root q^{j} listed twice")));
                }
                if *k != 0 {
                    js.push(*j);
                }
            }
            Root::Value(a) => return Err(Error::invalid(format!("root {a} is not a power of q; f is not invertible on the tree"))),
        }
    }
    let (jmin, jmax) = (js.iter().copied().min().unwrap_or(0), js.iter().copied().max().unwrap_or(0));
    let vq = tc.vq();
    let zero = PadicNumber::zero(tc.p(), tc.prec());
    let annulus = |j: i64| -> Result<i64> {
        let r1 = rat(3 * j + 1, 3) * rat(vq, 1);
        let r2 = rat(3 * j + 2, 3) * rat(vq, 1);
        slope(f, tc, &zero, &r1, &r2)
    };
    let m0 = annulus(0)?;
    let mut cusp = std::collections::BTreeMap::new();
    let mut spine = std::collections::BTreeMap::new();
    for j in jmin..=jmax {
        spine.insert(j, BigInt::from(2 * m0 - annulus(j)?));
        if js.contains(&j) {
            let base = rat(j * vq, 1);
            let n = slope(f, tc, &tc.q_pow(j), &(&base + rat(1, 1)), &(&base + rat(2, 1)))?;
            cusp.insert(j, BigInt::from(n));
        }
    }
    let c = Current::windowed(Ring::Z, jmin, jmax, cusp, spine)?;
    c.validate()?;
    // The left tail is fixed by the relation; cross-check it against the slope there.
    if c.spine(jmin - 1) != BigInt::from(2 * m0 - annulus(jmin - 1)?) {
        return Err(Error::CurrentViolation(jmin - 1));
    }
    Ok(c)
}
