//! Orders of vanishing of `Σ a_i/(X − i)` at a point `x`, for coefficients
//! `a_i ∈ Q_p` and poles `i` in `K_0 = Q_p` or `Q_p(π)`.
//!
//! With `t = X − x`, `1/(X − i) = −Σ_k t^k/(i − x)^{k+1}`, so the truncation
//! map `φ_n : Q_p^I → K_0[[t]]/t^n` has matrix entries `−(i − x)^{−(k+1)}`.
//! Poles and `x` are exact elements of `Q(√p)`, so kernels are computed exactly
//! over `Q` after splitting each `K_0` coordinate into its `1, π` parts.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::berkovich::{EvalPoint, PointValue};
use crate::error::{Error, Result};
use crate::ext::{parse_rational, ExtQ};
use crate::linalg::{certified_rank, nullspace, Matrix};
use crate::padic::{ppow, vp_rational, PadicNumber, QuadRational};

/// Finite family of poles `I` and evaluation point `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleFamily {
    p: u64,
    poles: Vec<QuadRational>,
    x: QuadRational,
    c: u8,
}

/// Wire form of an element of `Q(√p)`: `"a/b"` or `{"re": "a/b", "pi": "c/d"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuadRepr {
    Rational(String),
    Quad { re: String, pi: String },
}

impl QuadRepr {
    pub fn parse(&self, p: u64) -> Result<QuadRational> {
        match self {
            QuadRepr::Rational(s) => Ok(QuadRational::rational(p, parse_rational(s)?)),
            QuadRepr::Quad { re, pi } => Ok(QuadRational::new(p, parse_rational(re)?, parse_rational(pi)?)),
        }
    }

    pub fn from_quad(q: &QuadRational) -> Self {
        if q.b.is_zero() {
            QuadRepr::Rational(q.a.to_string())
        } else {
            QuadRepr::Quad { re: q.a.to_string(), pi: q.b.to_string() }
        }
    }
}

/// File format: `{"p": 5, "poles": [...], "x": ..., "c": 1}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoleFamilyRepr {
    pub p: u64,
    pub poles: Vec<QuadRepr>,
    pub x: QuadRepr,
    #[serde(default)]
    pub c: Option<u8>,
}

impl PoleFamily {
    /// `c` defaults to 1 when every pole and `x` lie in `Q_p`, else 2.
    pub fn new(p: u64, poles: Vec<QuadRational>, x: QuadRational, c: Option<u8>) -> Result<Self> {
        let quad = poles.iter().chain([&x]).any(|q| !q.b.is_zero());
        let c = c.unwrap_or(if quad { 2 } else { 1 });
        if c != 1 && c != 2 {
            return Err(Error::invalid(format!("degree C = {c} not supported, use 1 or 2")));
        }
        if c == 1 && quad {
            return Err(Error::invalid("C = 1 but a pole or x has a π component"));
        }
        for (k, i) in poles.iter().enumerate() {
            if i.p != p {
                return Err(Error::PrimeMismatch(p, i.p));
            }
            if *i == x {
                return Err(Error::PoleCollision(format!("pole {k} equals x")));
            }
            if poles[..k].contains(i) {
                return Err(Error::invalid(format!("pole {k} repeats an earlier pole")));
            }
        }
        Ok(PoleFamily { p, poles, x, c })
    }

    pub fn rational(p: u64, poles: &[BigRational], x: &BigRational) -> Result<Self> {
        let poles = poles.iter().map(|i| QuadRational::rational(p, i.clone())).collect();
        PoleFamily::new(p, poles, QuadRational::rational(p, x.clone()), None)
    }

    pub fn from_repr(r: &PoleFamilyRepr) -> Result<Self> {
        let poles = r.poles.iter().map(|q| q.parse(r.p)).collect::<Result<Vec<_>>>()?;
        PoleFamily::new(r.p, poles, r.x.parse(r.p)?, r.c)
    }

    pub fn to_repr(&self) -> PoleFamilyRepr {
        PoleFamilyRepr {
            p: self.p,
            poles: self.poles.iter().map(QuadRepr::from_quad).collect(),
            x: QuadRepr::from_quad(&self.x),
            c: Some(self.c),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn c(&self) -> u8 {
        self.c
    }

    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn poles(&self) -> &[QuadRational] {
        &self.poles
    }

    pub fn x(&self) -> &QuadRational {
        &self.x
    }

    /// Translate every pole and `x` by `s`.
    pub fn translate(&self, s: &QuadRational) -> Self {
        PoleFamily {
            p: self.p,
            poles: self.poles.iter().map(|i| i.add(s)).collect(),
            x: self.x.add(s),
            c: self.c,
        }
    }

    /// `−(i − x)^{−(k+1)}` for every pole, `k < n`.
    fn expansion(&self, n: usize) -> Vec<Vec<QuadRational>> {
        let mut cols = Vec::with_capacity(self.poles.len());
        for i in &self.poles {
            let w = i.sub(&self.x).inv().expect("poles differ from x");
            let mut col = Vec::with_capacity(n);
            let mut pw = w.clone();
            for _ in 0..n {
                col.push(QuadRational::new(self.p, -pw.a.clone(), -pw.b.clone()));
                pw = pw.mul(&w);
            }
            cols.push(col);
        }
        cols
    }

    /// Rational matrix of `φ_n`: for each `k < n`, one row per `K_0` coordinate.
    pub fn phi_matrix(&self, n: usize) -> Matrix {
        let cols = self.expansion(n);
        let mut m = Vec::new();
        for k in 0..n {
            m.push(cols.iter().map(|c| c[k].a.clone()).collect());
            if self.c == 2 {
                m.push(cols.iter().map(|c| c[k].b.clone()).collect());
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderSetResult {
    /// Achieved orders in `[0, nmax]`.
    pub e_window: BTreeSet<usize>,
    /// `u[n] = #(E ∩ [0, n])` for `n = 0..=nmax`.
    pub u: Vec<usize>,
    /// `dims[n] = dim V_n`, `V_n` the image of `φ_n`, for `n = 0..=nmax+1`.
    pub dims: Vec<usize>,
    pub c: u8,
}

impl OrderSetResult {
    /// First `n` violating `dim V_n ≤ C·u_n`, if any.
    pub fn density_violation(&self) -> Option<usize> {
        (0..self.u.len()).find(|&n| self.dims[n] > self.c as usize * self.u[n])
    }
}

/// `k ∈ E` iff `dim V_{k+1} > dim V_k`, i.e. `ker φ_{k+1} ⊊ ker φ_k`.
pub fn order_set(fam: &PoleFamily, nmax: usize, prec: i64) -> Result<OrderSetResult> {
    let full = fam.phi_matrix(nmax + 1);
    let rows_per = fam.c as usize;
    let mut dims = Vec::with_capacity(nmax + 2);
    for n in 0..=nmax + 1 {
        let m: Matrix = full[..n * rows_per].to_vec();
        let r = if m.is_empty() { 0 } else { certified_rank(&m, fam.p, prec)?.rank };
        dims.push(r);
    }
    let e_window: BTreeSet<usize> = (0..=nmax).filter(|&k| dims[k + 1] > dims[k]).collect();
    let mut u = Vec::with_capacity(nmax + 1);
    let mut count = 0;
    for n in 0..=nmax {
        if e_window.contains(&n) {
            count += 1;
        }
        u.push(count);
    }
    Ok(OrderSetResult { e_window, u, dims, c: fam.c })
}

/// `ord_x(Σ a_i/(X − i))`, searched up to `window`.
pub fn order_of_combination(a: &[BigRational], fam: &PoleFamily, window: usize) -> Result<usize> {
    if a.len() != fam.len() {
        return Err(Error::invalid(format!("{} coefficients for {} poles", a.len(), fam.len())));
    }
    if a.iter().all(|x| x.is_zero()) {
        return Err(Error::invalid("zero coefficient vector"));
    }
    let cols = fam.expansion(window + 1);
    for k in 0..=window {
        let mut s = QuadRational::rational(fam.p, BigRational::zero());
        for (ai, col) in a.iter().zip(&cols) {
            s = s.add(&col[k].mul(&QuadRational::rational(fam.p, ai.clone())));
        }
        if !s.is_zero() {
            return Ok(k);
        }
    }
    Err(Error::precision("order of combination", format!("> {window}"), window))
}

pub fn is_p_power(m: u64, p: u64) -> bool {
    let mut x = m;
    while x > 1 && x % p == 0 {
        x /= p;
    }
    x == 1
}

/// Orders `k` in `e` with `k + 1` not a power of `p`.
pub fn nonppower_orders(e: &BTreeSet<usize>, p: u64) -> Vec<usize> {
    e.iter().copied().filter(|&k| !is_p_power(k as u64 + 1, p)).collect()
}

/// A combination with coefficients in `Z_(p)`, its order, and that order's
/// witness that `k + 1` is not a `p`-power.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonPowerCombination {
    pub order: usize,
    #[serde(serialize_with = "ser_rationals")]
    pub coeffs: Vec<BigRational>,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for q in v {
        seq.serialize_element(&q.to_string())?;
    }
    seq.end()
}

pub fn find_nonppower_order(fam: &PoleFamily, nmax: usize, prec: i64) -> Result<NonPowerCombination> {
    let res = order_set(fam, nmax, prec)?;
    let Some(&k) = nonppower_orders(&res.e_window, fam.p).first() else {
        return Err(Error::NoNonPowerOrder { p: fam.p, nmax });
    };
    let mk = fam.phi_matrix(k);
    let basis = if mk.is_empty() {
        (0..fam.len())
            .map(|i| (0..fam.len()).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect()
    } else {
        nullspace(&mk, fam.len())
    };
    for v in basis {
        if order_of_combination(&v, fam, k)? == k {
            let coeffs = rescale_to_zp(&v, fam.p);
            return Ok(NonPowerCombination { order: k, coeffs });
        }
    }
    unreachable!("k is in E, so ker φ_k is not contained in ker φ_(k+1)")
}

/// Multiply by `p^{max(−v(a_i))}` so every entry lies in `Z_(p)`.
pub fn rescale_to_zp(a: &[BigRational], p: u64) -> Vec<BigRational> {
    let m = a.iter().filter_map(|x| vp_rational(x, p)).map(|v| -v).max().unwrap_or(0).max(0);
    let s = BigRational::from_integer(ppow(p, m as u64));
    a.iter().map(|x| x * &s).collect()
}

/// Representative of `a mod p^n` in `[0, p^n)`.
pub fn integer_approximation(a: &PadicNumber, n: u32) -> Result<BigInt> {
    a.residue(n)
}

pub fn finite_product_eval(poles: &[PadicNumber], exps: &[i64], x: &PadicNumber, z: &EvalPoint) -> Result<PointValue> {
    if poles.len() != exps.len() {
        return Err(Error::invalid("one exponent per pole required"));
    }
    let p = x.p();
    match z {
        EvalPoint::Value(z) => {
            let mut acc = PadicNumber::one(p, z.prec().min(x.prec()));
            for (i, &a) in poles.iter().zip(exps) {
                if a == 0 {
                    continue;
                }
                let num = z - i;
                let den = x - i;
                if num.is_zero() || den.is_zero() {
                    return Err(Error::PoleCollision(format!("evaluation point meets {i}")));
                }
                acc = &acc * &num.checked_div(&den)?.pow(a)?;
            }
            Ok(PointValue::Value(acc))
        }
        EvalPoint::Ball(b) => {
            let mut total = BigRational::zero();
            for (i, &a) in poles.iter().zip(exps) {
                if a == 0 {
                    continue;
                }
                let den = x - i;
                if den.is_zero() {
                    return Err(Error::PoleCollision(format!("x meets {i}")));
                }
                let d = (b.center() - i).valuation();
                let vb = d.min(b.logradius().clone());
                let ExtQ::Finite(vb) = vb else {
                    return Err(Error::PoleCollision(format!("type-1 point at {i}")));
                };
                total += (vb - crate::ext::rat(den.val().unwrap(), 1)) * crate::ext::rat(a, 1);
            }
            Ok(PointValue::LogNorm(ExtQ::Finite(total)))
        }
    }
}

/// `t, g(t), g²(t), …` for the Möbius map `g = (a b; c d)`, `count` terms.
pub fn orbit_family(g: [[BigRational; 2]; 2], t: &BigRational, count: usize) -> Result<Vec<BigRational>> {
    let det = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
    if det.is_zero() {
        return Err(Error::invalid("Möbius matrix is singular"));
    }
    let mut out = Vec::with_capacity(count);
    let mut z = t.clone();
    for k in 0..count {
        if out.contains(&z) {
            return Err(Error::invalid(format!("orbit repeats after {k} steps")));
        }
        out.push(z.clone());
        let den = &g[1][0] * &z + &g[1][1];
        if den.is_zero() {
            return Err(Error::invalid(format!("orbit reaches infinity after {} steps", k + 1)));
        }
        z = (&g[0][0] * &z + &g[0][1]) / den;
    }
    Ok(out)
}
