//! Splitting radii of `μ_{p^n}`-torsors `y^{p^n} = f` over a disk, and the
//! Artin–Schreier data of their reduction.
//!
//! The torsor splits over the ball `b_{0,ρ}` exactly when `f^{1/p^n}` converges
//! there, so the splitting log-radius is the convergence log-radius of the
//! binomial root series.

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::{rat, ExtQ};
use crate::padic::{BoundedSeries, PadicNumber, Tail};

/// A germ `f` at `0` with `f(0) = 1` and its ramification index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RamifiedGerm {
    f: BoundedSeries,
    e0: usize,
}

impl RamifiedGerm {
    /// Normalizes `f(0)` to 1 and computes `e0(f)`.
    pub fn new(f: BoundedSeries) -> Result<Self> {
        let p = f.p();
        let c0 = f.coeff(0).cloned().unwrap_or_else(|| PadicNumber::zero(p, 0));
        if c0.is_zero() {
            return Err(Error::invalid("germ must satisfy f(0) != 0"));
        }
        let f = if (&c0 - &PadicNumber::one(p, c0.prec())).is_zero() { f } else { f.scale(&c0.inv()?) };
        let e0 = first_nonconstant(&f)?;
        Ok(RamifiedGerm { f, e0 })
    }

    pub fn series(&self) -> &BoundedSeries {
        &self.f
    }

    pub fn e0(&self) -> usize {
        self.e0
    }

    pub fn p(&self) -> u64 {
        self.f.p()
    }
}

/// `min{k ≥ 1 : a_k ≠ 0}`, refusing to guess past coefficients whose digits ran out.
fn first_nonconstant(f: &BoundedSeries) -> Result<usize> {
    for (k, c) in f.explicit() {
        if k == 0 {
            continue;
        }
        if c.is_zero() {
            return Err(Error::precision(format!("coefficient of degree {k}"), "non-zero digit", c.prec()));
        }
        return Ok(k);
    }
    match f.tail() {
        Tail::Zero => Err(Error::ConstantGerm(f.degree())),
        Tail::Affine { .. } => Err(Error::precision("ramification index", "more explicit terms", f.degree())),
    }
}

/// `e0(f)`, cross-checked against `ord_0(df/f) + 1`.
pub fn ramification_index(f: &BoundedSeries) -> Result<usize> {
    let g = RamifiedGerm::new(f.clone())?;
    let ord = dlog_ord(g.series(), &PadicNumber::zero(f.p(), 0))?;
    debug_assert_eq!(ord + 1, g.e0() as i64);
    Ok(g.e0())
}

/// Closed form `(n + 1/(p−1))/N` for `f = 1 + X^N`.
pub fn splitting_logradius_exact(big_n: u32, n: u32, p: u64) -> BigRational {
    assert!(big_n >= 1, "N must be positive");
    (rat(n as i64, 1) + rat(1, p as i64 - 1)) / rat(big_n as i64, 1)
}

/// Convergence log-radius of `f^{1/p^n}`: the torsor splits on `b_{0,ρ}` iff `ρ` exceeds it.
pub fn splitting_logradius_numeric(g: &RamifiedGerm, n: u32) -> Result<ExtQ> {
    g.f.p_power_root(n)?.convergence_logradius()
}

/// Reduction data of the Artin–Schreier cover `T^p − T = X^e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArtinSchreierData {
    pub e: u64,
    pub p: u64,
    pub m: u32,
    pub d: u64,
    pub genus: u64,
    /// Positive genus forces the point into the vertex set of the cover.
    pub forces_vertex: bool,
    pub residue_equation: String,
}

pub fn artin_schreier_certificate(e: u64, p: u64) -> Result<ArtinSchreierData> {
    if e == 0 {
        return Err(Error::invalid("e must be positive"));
    }
    let (mut m, mut d) = (0u32, e);
    while d % p == 0 {
        d /= p;
        m += 1;
    }
    let genus = (d - 1) * (p - 1) / 2;
    Ok(ArtinSchreierData {
        e,
        p,
        m,
        d,
        genus,
        forces_vertex: genus >= 1,
        residue_equation: format!("T^{p} - T = X^{e}"),
    })
}

/// `(x−z)`-adic order of `(df/f)/dx`, in `Z_{≥ −1}`.
pub fn dlog_ord(f: &BoundedSeries, shift: &PadicNumber) -> Result<i64> {
    let g = f.recenter(shift)?;
    let mut explicit = g.explicit().peekable();
    match explicit.peek() {
        Some((0, c)) if c.is_zero() => {
            return Err(Error::precision("value at the expansion point", "non-zero digit", c.prec()))
        }
        Some((0, _)) => {}
        _ => {
            if g.explicit().next().is_none() && g.tail() == &Tail::Zero {
                return Err(Error::invalid("f is identically zero"));
            }
            return Ok(-1);
        }
    }
    let k = first_nonconstant(&g)?;
    Ok(k as i64 - 1)
}
