//! Reading `ord_z(δ(c)) + 1` off splitting radii.
//!
//! Let `ρ_m` be the log-radius of the splitting point of the `μ_{p^m}`-torsor
//! of `α(c)` about `z`, and `λ_n = v(z) + n + 1/(p−1)` the log-radius of the
//! `n`-th point of the canonical ladder at `z`. With
//! `M(n) = min{m : ρ_m ≥ λ_n}` the increments `M(n) − M(n−1)` settle at
//! `e = ord_z(δ(c)) + 1`, since `ρ_m` grows like `m/e` while `λ_n` grows like `n`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::current::{Current, Ring};
use super::TateCurve;
use crate::berkovich::ladder_logradius;
use crate::error::{Error, Result};
use crate::ext::rat;
use crate::padic::{BoundedSeries, PadicNumber, Tail};

/// Explicit degree of the germs used by the ladder.
pub const GERM_DEGREE: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderResult {
    /// Estimate of `ord_z(δ(c)) + 1`.
    pub ord_plus_one: i64,
    /// Set when `z` is a cusp with non-zero value, so `ord = −1`.
    pub short_circuit: bool,
    /// `(n, M(n))` for `n = 1..=nmax`.
    pub table: Vec<(u32, u64)>,
    pub increments: Vec<i64>,
    /// `M(nmax)/nmax`.
    #[serde(serialize_with = "crate::ext::rational_str::serialize")]
    pub ratio: BigRational,
}

/// `(1 + t/w)^e` as a bounded series.
fn binomial_factor(w: &PadicNumber, e: i64, degree: usize, prec: i64) -> Result<BoundedSeries> {
    let p = w.p();
    let winv = w.inv()?;
    let top = if e >= 0 { e as usize } else { degree };
    let mut coeffs = BTreeMap::new();
    let mut binom = BigInt::from(1);
    let mut wk = PadicNumber::one(p, prec);
    for k in 0..=top {
        if k > 0 {
            binom = binom * BigInt::from(e - k as i64 + 1) / BigInt::from(k as i64);
            wk = &wk * &winv;
        }
        coeffs.insert(k, &PadicNumber::from_bigint(p, &binom, prec) * &wk);
    }
    let tail = if e >= 0 {
        Tail::Zero
    } else {
        Tail::affine(rat(-w.val().unwrap(), 1), BigRational::zero(), false)
    };
    BoundedSeries::new(p, top, coeffs, tail)
}

/// Germ `α(c)(z + t)/α(c)(z)` of a window-supported integer current.
pub fn alpha_germ(c: &Current, tc: &TateCurve, z: &PadicNumber, degree: usize) -> Result<BoundedSeries> {
    if *c.ring() != Ring::Z || c.period().is_some() {
        return Err(Error::invalid("the ladder needs a window-supported integer current"));
    }
    c.validate()?;
    let prec = tc.prec().min(z.prec());
    let small = |v: &BigInt| v.to_i64().ok_or_else(|| Error::invalid("current value does not fit in i64"));
    let mut m = small(&c.spine(0))?;
    let mut factors = Vec::new();
    for (j, v) in c.cusp_support() {
        let k = small(v)?;
        if j >= 1 {
            m -= k;
        }
        let w = z - &tc.q_pow(j);
        if w.is_zero() {
            return Err(Error::PoleCollision(format!("z = q^{j}")));
        }
        factors.push((w, k));
    }
    factors.push((z.clone(), m));
    let mut g = BoundedSeries::polynomial(tc.p(), [(0, PadicNumber::one(tc.p(), prec))]);
    for (w, k) in factors {
        if k != 0 {
            g = g.mul(&binomial_factor(&w, k, degree, prec)?);
        }
    }
    Ok(g)
}

/// Smallest `m` with `ρ_m ≥ target`, scanning from `start`.
fn first_reaching(h: &BoundedSeries, p: u64, target: &BigRational, start: u64, cap: u64) -> Result<Option<u64>> {
    for m in start.max(1)..=cap {
        let t = rat(m as i64, 1) + rat(1, p as i64 - 1);
        let Some((rho, dominant)) = h.newton_threshold(&t) else { return Ok(None) };
        if rho >= *target {
            if dominant {
                return Ok(Some(m));
            }
            return Err(Error::ThresholdUndecidable { upper: rho.to_string() });
        }
        // rho is an upper bound for ρ_m in every case, so m is excluded.
    }
    Ok(None)
}

pub fn ladder_ord(c: &Current, tc: &TateCurve, z: &PadicNumber, nmax: u32) -> Result<LadderResult> {
    let p = tc.p();
    let vz = z.val().ok_or_else(|| Error::invalid("ladder point needs z != 0"))?;
    if *c.ring() == Ring::Z && c.period().is_none() {
        for (j, _) in c.cusp_support() {
            if (z - &tc.q_pow(j)).is_zero() {
                return Ok(LadderResult {
                    ord_plus_one: 0,
                    short_circuit: true,
                    table: Vec::new(),
                    increments: Vec::new(),
                    ratio: BigRational::zero(),
                });
            }
        }
    }
    let g = alpha_germ(c, tc, z, GERM_DEGREE)?;
    if g.is_certainly_constant() {
        return Err(Error::ConstantGerm(g.degree()));
    }
    let cap = 64 * (nmax as u64 + 2) + (vz.unsigned_abs() + 1) * 64;
    let mut table = Vec::new();
    let mut prev = 1u64;
    for n in 1..=nmax {
        let target = ladder_logradius(z, n)?;
        let m = first_reaching(&g, p, &target, prev, cap)?
            .ok_or_else(|| Error::NotStabilized { nmax, increments: increments(&table) })?;
        table.push((n, m));
        prev = m;
    }
    let inc = increments(&table);
    let stable = inc.len() >= 2 && inc[inc.len() - 1] == inc[inc.len() - 2] && inc[inc.len() - 1] > 0;
    if !stable {
        return Err(Error::NotStabilized { nmax, increments: inc });
    }
    let ratio = rat(table.last().unwrap().1 as i64, nmax as i64);
    Ok(LadderResult { ord_plus_one: *inc.last().unwrap(), short_circuit: false, table, increments: inc, ratio })
}

fn increments(table: &[(u32, u64)]) -> Vec<i64> {
    table.windows(2).map(|w| w[1].1 as i64 - w[0].1 as i64).collect()
}
