//! Ball points `b_{a,ρ}` of the Berkovich affine line.
//!
//! A point is a center `a` and a log-radius `ρ = −log_p r`; `ρ = +∞` is the
//! type-1 point `a` itself. Only rational log-radii are representable, so
//! every point is of type 1 or 2. Seminorms are returned in log form:
//! `v_b(f) = −log_p |f|_b = min_i (v(g_i) + i·ρ)` where `g` is `f` re-expanded
//! about the center.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{ceil_int, rat, ExtQ};
use crate::padic::{binom_rational, PadicNumber};

/// Polynomial with p-adic coefficients. A missing degree is an exact zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    p: u64,
    coeffs: BTreeMap<usize, PadicNumber>,
}

impl Polynomial {
    pub fn new(p: u64, coeffs: BTreeMap<usize, PadicNumber>) -> Self {
        Polynomial { p, coeffs }
    }

    /// Dense constructor; entries that are zero at their precision are taken
    /// as exact zeros.
    pub fn from_coeffs(p: u64, coeffs: Vec<PadicNumber>) -> Self {
        let coeffs = coeffs.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        Polynomial { p, coeffs }
    }

    /// `c·X^k`.
    pub fn monomial(c: PadicNumber, k: usize) -> Self {
        let p = c.p();
        Polynomial::from_coeffs(p, vec![PadicNumber::zero(p, c.prec()); k].into_iter().chain([c]).collect())
    }

    /// `X − a`.
    pub fn linear(a: &PadicNumber) -> Self {
        let p = a.p();
        let mut coeffs = BTreeMap::new();
        if !a.is_zero() {
            coeffs.insert(0, -a);
        }
        coeffs.insert(1, PadicNumber::one(p, a.prec().max(1)));
        Polynomial { p, coeffs }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, PadicNumber> {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<usize, PadicNumber> = BTreeMap::new();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                let t = a * b;
                let e = out.entry(i + j).or_insert_with(|| PadicNumber::zero(self.p, t.prec()));
                *e = &*e + &t;
            }
        }
        Polynomial { p: self.p, coeffs: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.coeffs.clone();
        for (j, b) in &other.coeffs {
            let e = out.entry(*j).or_insert_with(|| PadicNumber::zero(self.p, b.prec()));
            *e = &*e + b;
        }
        Polynomial { p: self.p, coeffs: out }
    }

    pub fn eval(&self, z: &PadicNumber) -> PadicNumber {
        let prec = self.coeffs.values().map(|c| c.prec()).min().unwrap_or(z.prec());
        let mut acc = PadicNumber::zero(self.p, prec);
        for (k, c) in &self.coeffs {
            acc = &acc + &(c * &z.pow(*k as i64).expect("non-negative power"));
        }
        acc
    }

    /// Coefficients of `f(Y + a)`.
    pub fn taylor_shift(&self, a: &PadicNumber) -> Self {
        if a.is_zero() {
            return self.clone();
        }
        let mut out: BTreeMap<usize, PadicNumber> = BTreeMap::new();
        for (i, c) in &self.coeffs {
            for k in 0..=*i {
                let b = binom_rational(&rat(*i as i64, 1), k as u64);
                let bin = PadicNumber::from_rational(self.p, &b, c.prec().max(1) + a.prec().max(1));
                let t = &(c * &bin) * &a.pow((i - k) as i64).expect("non-negative power");
                let e = out.entry(k).or_insert_with(|| PadicNumber::zero(self.p, t.prec()));
                *e = &*e + &t;
            }
        }
        Polynomial { p: self.p, coeffs: out }
    }
}

/// The point `b_{a,ρ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BallRepr")]
pub struct BallPoint {
    center: PadicNumber,
    logradius: ExtQ,
}

#[derive(Deserialize)]
struct BallRepr {
    center: PadicNumber,
    logradius: ExtQ,
}

impl TryFrom<BallRepr> for BallPoint {
    type Error = Error;
    fn try_from(r: BallRepr) -> Result<Self> {
        BallPoint::new(r.center, r.logradius)
    }
}

impl BallPoint {
    /// The center must be known to absolute precision `≥ ρ` so that the ball
    /// is determined.
    pub fn new(center: PadicNumber, logradius: ExtQ) -> Result<Self> {
        match &logradius {
            ExtQ::NegInf => return Err(Error::invalid("log-radius -inf is not a point of the affine line")),
            ExtQ::Finite(rho) => {
                let need = ceil_int(rho);
                if num_bigint::BigInt::from(center.prec()) < need {
                    return Err(Error::precision("ball center", need, center.prec()));
                }
            }
            ExtQ::PosInf => {}
        }
        Ok(BallPoint { center, logradius })
    }

    pub fn type1(center: PadicNumber) -> Self {
        BallPoint { center, logradius: ExtQ::PosInf }
    }

    /// The Gauss point `b_{0,1}` (log-radius 0).
    pub fn gauss(p: u64, prec: i64) -> Self {
        BallPoint { center: PadicNumber::zero(p, prec), logradius: ExtQ::zero() }
    }

    pub fn center(&self) -> &PadicNumber {
        &self.center
    }

    pub fn logradius(&self) -> &ExtQ {
        &self.logradius
    }

    pub fn p(&self) -> u64 {
        self.center.p()
    }

    /// Ball containment `b_{a,ρ} ⊆ b_{a',ρ'}` as balls: `ρ ≥ ρ'` and `v(a − a') ≥ ρ'`.
    pub fn le(&self, other: &BallPoint) -> bool {
        self.logradius >= other.logradius && (&self.center - &other.center).valuation() >= other.logradius
    }
}

impl fmt::Display for BallPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b({}, {})", self.center, self.logradius)
    }
}

/// Where to evaluate a function: at a type-1 point or through its seminorm at a ball.
#[derive(Debug, Clone)]
pub enum EvalPoint {
    Value(PadicNumber),
    Ball(BallPoint),
}

/// A value at a type-1 point, or `−log_p` of the seminorm at a ball point.
#[derive(Debug, Clone, PartialEq)]
pub enum PointValue {
    Value(PadicNumber),
    LogNorm(ExtQ),
}

/// `v_b(f) = min_i (v(g_i) + iρ)` with `g(Y) = f(Y + a)`.
///
/// Fails when a coefficient whose digits are exhausted could still decide the
/// minimum.
pub fn seminorm(f: &Polynomial, b: &BallPoint) -> Result<ExtQ> {
    if f.p() != b.p() {
        return Err(Error::PrimeMismatch(f.p(), b.p()));
    }
    let g = f.taylor_shift(&b.center);
    match &b.logradius {
        ExtQ::PosInf => match g.coeffs.get(&0) {
            None => Ok(ExtQ::PosInf),
            Some(c) if c.is_zero() => Err(Error::precision("seminorm at a type-1 point", "+inf", c.prec())),
            Some(c) => Ok(c.valuation()),
        },
        ExtQ::Finite(rho) => {
            let mut exact: Option<BigRational> = None;
            let mut unknown: Option<BigRational> = None;
            for (i, c) in &g.coeffs {
                let shift = rho * rat(*i as i64, 1);
                let slot = if c.is_zero() { &mut unknown } else { &mut exact };
                let v = rat(c.val_lower_bound(), 1) + shift;
                if slot.as_ref().map_or(true, |m| v < *m) {
                    *slot = Some(v);
                }
            }
            match (exact, unknown) {
                (None, None) => Ok(ExtQ::PosInf),
                (Some(e), None) => Ok(ExtQ::Finite(e)),
                (Some(e), Some(u)) if e <= u => Ok(ExtQ::Finite(e)),
                (_, Some(u)) => Err(Error::precision("seminorm coefficient", "more digits", u)),
            }
        }
        ExtQ::NegInf => unreachable!("validated at construction"),
    }
}

pub fn same_point(b1: &BallPoint, b2: &BallPoint) -> bool {
    b1.logradius == b2.logradius && (&b1.center - &b2.center).valuation() >= b1.logradius
}

/// Type of a represented point: 1 for `ρ = ∞`, 2 otherwise.
pub fn classify_type(b: &BallPoint) -> u8 {
    if b.logradius == ExtQ::PosInf {
        1
    } else {
        2
    }
}

/// Smallest ball containing two type-1 points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Join {
    pub point: BallPoint,
    /// Set when the centers agree at working precision; `point` is then type 1.
    pub coincident: bool,
}

pub fn join(a1: &PadicNumber, a2: &PadicNumber) -> Result<Join> {
    if a1.p() != a2.p() {
        return Err(Error::PrimeMismatch(a1.p(), a2.p()));
    }
    let d = a1 - a2;
    if d.is_zero() {
        return Ok(Join { point: BallPoint::type1(a1.clone()), coincident: true });
    }
    let point = BallPoint::new(a1.clone(), d.valuation())?;
    Ok(Join { point, coincident: false })
}

/// `b_{z, v(z) + n + 1/(p−1)}`.
pub fn ladder_point(z: &PadicNumber, n: u32) -> Result<BallPoint> {
    ladder_point_at(z, &ladder_logradius(z, n)?)
}

/// Log-radius `v(z) + n + 1/(p−1)` of the `n`-th ladder point.
pub fn ladder_logradius(z: &PadicNumber, n: u32) -> Result<BigRational> {
    let v = z.val().ok_or_else(|| Error::invalid("ladder point needs z != 0"))?;
    Ok(rat(v + n as i64, 1) + rat(1, z.p() as i64 - 1))
}

fn ladder_point_at(z: &PadicNumber, rho: &BigRational) -> Result<BallPoint> {
    BallPoint::new(z.clone(), ExtQ::Finite(rho.clone()))
}

/// The ray `{b_{z,ρ} : ρ_end ≤ ρ ≤ ρ_start}` traversed with `ρ` decreasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    anchor: PadicNumber,
    rho_start: ExtQ,
    rho_end: ExtQ,
}

impl Segment {
    pub fn new(anchor: PadicNumber, rho_start: ExtQ, rho_end: ExtQ) -> Result<Self> {
        if rho_end > rho_start || rho_end == ExtQ::NegInf {
            return Err(Error::invalid(format!("segment needs {rho_end} <= {rho_start}, both above -inf")));
        }
        BallPoint::new(anchor.clone(), rho_end.clone())?;
        Ok(Segment { anchor, rho_start, rho_end })
    }

    /// `[z, b_{z,ρ}]`.
    pub fn from_point(z: &PadicNumber, rho: ExtQ) -> Result<Self> {
        Segment::new(z.clone(), ExtQ::PosInf, rho)
    }

    pub fn start(&self) -> BallPoint {
        BallPoint { center: self.anchor.clone(), logradius: self.rho_start.clone() }
    }

    pub fn end(&self) -> BallPoint {
        BallPoint { center: self.anchor.clone(), logradius: self.rho_end.clone() }
    }

    pub fn at(&self, rho: &BigRational) -> Option<BallPoint> {
        let r = ExtQ::Finite(rho.clone());
        (r <= self.rho_start && r >= self.rho_end).then(|| BallPoint { center: self.anchor.clone(), logradius: r })
    }

    pub fn contains(&self, b: &BallPoint) -> bool {
        b.logradius <= self.rho_start
            && b.logradius >= self.rho_end
            && (&b.center - &self.anchor).valuation() >= b.logradius
    }

    /// `[x, y]` for type-1 points as two rays meeting at their join.
    pub fn between(x: &PadicNumber, y: &PadicNumber) -> Result<(Segment, Segment)> {
        let j = join(x, y)?;
        let top = j.point.logradius.clone();
        Ok((Segment::new(x.clone(), ExtQ::PosInf, top.clone())?, Segment::new(y.clone(), ExtQ::PosInf, top)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pn(p: u64, n: i64) -> PadicNumber {
        PadicNumber::from_int(p, n, 40)
    }

    #[test]
    fn seminorm_examples() {
        let p = 3;
        let x = Polynomial::monomial(pn(p, 1), 1);
        let b = BallPoint::new(pn(p, 0), ExtQ::frac(5, 2)).unwrap();
        assert_eq!(seminorm(&x, &b).unwrap(), ExtQ::frac(5, 2));
        let c = Polynomial::monomial(pn(p, 3), 0);
        assert_eq!(seminorm(&c, &BallPoint::gauss(p, 40)).unwrap(), ExtQ::int(1));
        let f = Polynomial::from_coeffs(p, vec![pn(p, 0), pn(p, 3), pn(p, 1)]);
        let b1 = BallPoint::new(pn(p, 0), ExtQ::int(1)).unwrap();
        assert_eq!(seminorm(&f, &b1).unwrap(), ExtQ::int(2));
    }

    #[test]
    fn seminorm_recenters() {
        // X − 1 at b_{1,2}: re-expanded it is Y, so the value is 2.
        let p = 5;
        let f = Polynomial::linear(&pn(p, 1));
        let b = BallPoint::new(pn(p, 1), ExtQ::int(2)).unwrap();
        assert_eq!(seminorm(&f, &b).unwrap(), ExtQ::int(2));
        let b = BallPoint::type1(pn(p, 1));
        assert!(seminorm(&f, &b).is_err());
        let b = BallPoint::type1(pn(p, 6));
        assert_eq!(seminorm(&f, &b).unwrap(), ExtQ::int(1));
    }

    #[test]
    fn point_equality_and_types() {
        let p = 3;
        assert!(same_point(&BallPoint::gauss(p, 10), &BallPoint::new(pn(p, 1), ExtQ::zero()).unwrap()));
        assert!(!same_point(&BallPoint::type1(pn(p, 0)), &BallPoint::type1(pn(p, 3))));
        assert_eq!(classify_type(&BallPoint::type1(pn(p, 2))), 1);
        assert_eq!(classify_type(&BallPoint::new(pn(p, 0), ExtQ::frac(1, 2)).unwrap()), 2);
        assert_eq!(classify_type(&BallPoint::gauss(p, 4)), 2);
    }

    #[test]
    fn joins() {
        let p = 3;
        assert_eq!(join(&pn(p, 0), &pn(p, 1)).unwrap().point.logradius, ExtQ::zero());
        assert_eq!(join(&pn(p, 0), &pn(p, 3)).unwrap().point.logradius, ExtQ::int(1));
        let j = join(&pn(p, 3), &pn(p, 3 + 27)).unwrap();
        assert_eq!(j.point.logradius, ExtQ::int(3));
        assert!(same_point(&j.point, &join(&pn(p, 30), &pn(p, 3)).unwrap().point));
        assert!(join(&pn(p, 2), &pn(p, 2)).unwrap().coincident);
    }

    #[test]
    fn ladder() {
        let b = ladder_point(&pn(3, 2), 0).unwrap();
        assert_eq!(b.logradius, ExtQ::frac(1, 2));
        let b = ladder_point(&pn(2, 1), 2).unwrap();
        assert_eq!(b.logradius, ExtQ::int(3));
        assert!(ladder_point(&PadicNumber::zero(3, 10), 1).is_err());
    }

    #[test]
    fn segments() {
        let p = 5;
        let (s1, s2) = Segment::between(&pn(p, 1), &pn(p, 6)).unwrap();
        let top = s1.end();
        assert!(s1.contains(&top) && s2.contains(&top));
        assert!(s1.contains(&BallPoint::new(pn(p, 1), ExtQ::int(3)).unwrap()));
        assert!(!s1.contains(&BallPoint::new(pn(p, 6), ExtQ::int(3)).unwrap()));
        assert!(!s1.contains(&BallPoint::gauss(p, 10)));
    }
}
