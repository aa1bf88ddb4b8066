//! Power series with finitely many explicit p-adic coefficients and an affine
//! lower bound `v(a_k) ≥ αk + β` on every coefficient past the explicit range.
//!
//! Explicit coefficients are sparse: a degree inside `0..=degree` that has no
//! entry is an exact zero. This matters for expansions such as `(1 + X^N)^m`
//! where structural zeros would otherwise cost absolute precision.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::binom::binom_rational;
use super::number::{ppow, PadicNumber};
use crate::error::{Error, Result};
use crate::ext::{rat, rat_int, ExtQ};

/// Bound on the coefficients of degree `> degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    /// Every coefficient past the explicit range is zero.
    Zero,
    /// `v(a_k) ≥ alpha·k + beta` for all `k > degree`.
    ///
    /// `sharp` certifies that the slope cannot be improved:
    /// `liminf_k (v(a_k) − alpha·k) < ∞`.
    Affine { alpha: BigRational, beta: BigRational, sharp: bool },
}

impl Tail {
    pub fn affine(alpha: BigRational, beta: BigRational, sharp: bool) -> Self {
        Tail::Affine { alpha, beta, sharp }
    }

    fn slope(&self) -> Option<&BigRational> {
        match self {
            Tail::Zero => None,
            Tail::Affine { alpha, .. } => Some(alpha),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundedSeries {
    p: u64,
    degree: usize,
    coeffs: BTreeMap<usize, PadicNumber>,
    tail: Tail,
}

/// Log-radius of convergence certificate.
pub type LogRadius = ExtQ;

impl BoundedSeries {
    pub fn new(p: u64, degree: usize, coeffs: BTreeMap<usize, PadicNumber>, tail: Tail) -> Result<Self> {
        for (k, c) in &coeffs {
            if *k > degree {
                return Err(Error::invalid(format!("coefficient of degree {k} beyond explicit range {degree}")));
            }
            if c.p() != p {
                return Err(Error::PrimeMismatch(p, c.p()));
            }
        }
        Ok(BoundedSeries { p, degree, coeffs, tail })
    }

    /// Polynomial from `(degree, coefficient)` pairs.
    pub fn polynomial(p: u64, terms: impl IntoIterator<Item = (usize, PadicNumber)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, c) in terms {
            assert_eq!(c.p(), p);
            let entry = coeffs.entry(k).or_insert_with(|| PadicNumber::zero(p, c.prec()));
            *entry = &*entry + &c;
        }
        let degree = coeffs.keys().next_back().copied().unwrap_or(0);
        BoundedSeries { p, degree, coeffs, tail: Tail::Zero }
    }

    /// Polynomial with exact rational coefficients embedded at precision `prec`.
    /// Zero rationals are exact zeros.
    pub fn from_rationals(p: u64, terms: &[(usize, BigRational)], prec: i64) -> Self {
        let degree = terms.iter().map(|(k, _)| *k).max().unwrap_or(0);
        let mut s = Self::polynomial(p, terms.iter().filter(|(_, q)| !q.is_zero()).map(|(k, q)| (*k, PadicNumber::from_rational(p, q, prec))));
        s.degree = degree;
        s
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Largest explicitly represented degree.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// Explicit coefficient; `None` is an exact zero (or beyond the range).
    pub fn coeff(&self, k: usize) -> Option<&PadicNumber> {
        self.coeffs.get(&k)
    }

    pub fn explicit(&self) -> impl Iterator<Item = (usize, &PadicNumber)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Certified lower bound on `v(a_k)`.
    pub fn val_lower_bound(&self, k: usize) -> ExtQ {
        if k <= self.degree {
            return match self.coeffs.get(&k) {
                None => ExtQ::PosInf,
                Some(c) => ExtQ::int(c.val_lower_bound()),
            };
        }
        match &self.tail {
            Tail::Zero => ExtQ::PosInf,
            Tail::Affine { alpha, beta, .. } => ExtQ::Finite(alpha * rat(k as i64, 1) + beta),
        }
    }

    /// `min_{k > from} (v(a_k) − slope·k)`, or `None` when all those
    /// coefficients vanish. Fails if the tail decays slower than `slope`.
    fn offset_beyond(&self, from: Option<usize>, slope: &BigRational) -> Option<BigRational> {
        let start = from.map(|d| d + 1).unwrap_or(0);
        let mut best: Option<BigRational> = None;
        let mut take = |x: BigRational| {
            best = Some(match best.take() {
                Some(b) if b <= x => b,
                _ => x,
            });
        };
        for (k, c) in self.coeffs.range(start..) {
            take(rat(c.val_lower_bound(), 1) - slope * rat(*k as i64, 1));
        }
        if let Tail::Affine { alpha, beta, .. } = &self.tail {
            assert!(alpha >= slope, "tail slope below requested hull slope");
            let k0 = start.max(self.degree + 1);
            take((alpha - slope) * rat(k0 as i64, 1) + beta);
        }
        best
    }

    /// Common explicit range of two operands: the smaller range among those
    /// with an infinite tail, or the larger one when both are polynomials.
    fn common_degree(&self, other: &Self) -> usize {
        match (&self.tail, &other.tail) {
            (Tail::Zero, Tail::Zero) => self.degree.max(other.degree),
            (Tail::Zero, _) => other.degree,
            (_, Tail::Zero) => self.degree,
            _ => self.degree.min(other.degree),
        }
    }

    fn hull_slope(&self, other: &Self) -> Option<BigRational> {
        match (self.tail.slope(), other.tail.slope()) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => Some(a.min(b).clone()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let degree = self.common_degree(other);
        let mut coeffs: BTreeMap<usize, PadicNumber> = BTreeMap::new();
        for (k, c) in self.coeffs.range(..=degree).chain(other.coeffs.range(..=degree)) {
            let e = coeffs.entry(*k).or_insert_with(|| PadicNumber::zero(self.p, c.prec()));
            *e = &*e + c;
        }
        let tail = match self.hull_slope(other) {
            None => Tail::Zero,
            Some(alpha) => {
                let b1 = self.offset_beyond(Some(degree), &alpha);
                let b2 = other.offset_beyond(Some(degree), &alpha);
                let beta = match (b1, b2) {
                    (Some(x), Some(y)) => x.min(y),
                    (Some(x), None) | (None, Some(x)) => x,
                    (None, None) => BigRational::zero(),
                };
                // A strictly dominant sharp slope stays sharp.
                let sharp = match (&self.tail, &other.tail) {
                    (Tail::Affine { alpha: a, sharp: s, .. }, Tail::Zero)
                    | (Tail::Zero, Tail::Affine { alpha: a, sharp: s, .. }) => *s && *a == alpha,
                    (Tail::Affine { alpha: a1, sharp: s1, .. }, Tail::Affine { alpha: a2, sharp: s2, .. }) => {
                        (a1 < a2 && *s1) || (a2 < a1 && *s2)
                    }
                    _ => false,
                };
                Tail::Affine { alpha, beta, sharp }
            }
        };
        BoundedSeries { p: self.p, degree, coeffs, tail }
    }

    pub fn neg(&self) -> Self {
        BoundedSeries {
            p: self.p,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
            tail: self.tail.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let degree = match (&self.tail, &other.tail) {
            (Tail::Zero, Tail::Zero) => self.degree + other.degree,
            _ => self.common_degree(other),
        };
        let coeffs = sparse_mul(&self.coeffs, &other.coeffs, degree, self.p);
        let tail = match self.hull_slope(other) {
            None => Tail::Zero,
            Some(alpha) => {
                let b1 = self.offset_beyond(None, &alpha);
                let b2 = other.offset_beyond(None, &alpha);
                match (b1, b2) {
                    (Some(x), Some(y)) => Tail::Affine { alpha, beta: x + y, sharp: false },
                    // One factor is identically zero.
                    _ => Tail::Zero,
                }
            }
        };
        BoundedSeries { p: self.p, degree, coeffs, tail }
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: &PadicNumber) -> Self {
        let vc = rat(c.val_lower_bound(), 1);
        let tail = match &self.tail {
            Tail::Zero => Tail::Zero,
            Tail::Affine { alpha, beta, sharp } => Tail::Affine {
                alpha: alpha.clone(),
                beta: beta + vc,
                sharp: *sharp && !c.is_zero(),
            },
        };
        BoundedSeries {
            p: self.p,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(k, a)| (*k, a * c)).collect(),
            tail,
        }
    }

    /// The series of `f(cX)`.
    pub fn substitute_scaled(&self, c: &PadicNumber) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::invalid("substitution X -> cX needs c != 0"));
        }
        let vc = rat(c.val().unwrap(), 1);
        let mut coeffs = BTreeMap::new();
        for (k, a) in &self.coeffs {
            coeffs.insert(*k, a * &c.pow(*k as i64)?);
        }
        let tail = match &self.tail {
            Tail::Zero => Tail::Zero,
            Tail::Affine { alpha, beta, sharp } => Tail::Affine { alpha: alpha + vc, beta: beta.clone(), sharp: *sharp },
        };
        Ok(BoundedSeries { p: self.p, degree: self.degree, coeffs, tail })
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(k, _)| **k > 0)
            .map(|(k, a)| (k - 1, a * &PadicNumber::from_int(p, *k as i64, a.prec().max(1) + 64)))
            .collect();
        // v(k a_k) ≥ v(a_k) ≥ α k + β = α (k−1) + (α + β).
        let tail = match &self.tail {
            Tail::Zero => Tail::Zero,
            Tail::Affine { alpha, beta, .. } => Tail::Affine {
                alpha: alpha.clone(),
                beta: alpha + beta,
                sharp: false,
            },
        };
        BoundedSeries { p, degree: self.degree.saturating_sub(1), coeffs, tail }
    }

    /// Re-expansion `f(z + Y) = Σ g_k Y^k` about `z`.
    ///
    /// Needs `α + v(z) > 0` when the tail is infinite; the part of the tail
    /// feeding each explicit `g_k` is accounted for by lowering its precision.
    pub fn recenter(&self, z: &PadicNumber) -> Result<Self> {
        if z.is_zero() {
            return Ok(self.clone());
        }
        let vz = z.val().unwrap();
        let p = self.p;
        let cut = match &self.tail {
            Tail::Zero => None,
            Tail::Affine { alpha, beta, .. } => {
                let slope = alpha + rat(vz, 1);
                if !slope.is_positive() {
                    return Err(Error::invalid(format!("recentering at v(z) = {vz} leaves the convergence disk")));
                }
                Some((slope * rat(self.degree as i64 + 1, 1) + beta, vz))
            }
        };
        let mut coeffs: BTreeMap<usize, PadicNumber> = BTreeMap::new();
        let zpow: Vec<PadicNumber> = (0..=self.degree).map(|i| z.pow(i as i64).expect("non-negative power")).collect();
        for (i, a) in &self.coeffs {
            let mut binom = BigInt::one();
            for k in (0..=*i).rev() {
                // binom = C(i, i−k) = C(i, k), built up from k = i downwards
                let c = PadicNumber::from_bigint(p, &binom, a.prec().max(1) + 64);
                let t = &(a * &c) * &zpow[i - k];
                let e = coeffs.entry(k).or_insert_with(|| PadicNumber::zero(p, t.prec()));
                *e = &*e + &t;
                if k > 0 {
                    binom = binom * BigInt::from(k) / BigInt::from(i - k + 1);
                }
            }
        }
        if let Some((base, vz)) = cut {
            for (k, c) in coeffs.iter_mut() {
                let bound = &base - rat(vz * *k as i64, 1);
                let prec = crate::ext::ceil_int(&bound);
                let prec: i64 = prec.try_into().unwrap_or(i64::MAX);
                *c = c.truncate(prec);
            }
            for k in 0..=self.degree {
                coeffs.entry(k).or_insert_with(|| {
                    let bound = &base - rat(vz * k as i64, 1);
                    PadicNumber::zero(p, crate::ext::ceil_int(&bound).try_into().unwrap_or(i64::MAX))
                });
            }
        }
        Ok(BoundedSeries { p, degree: self.degree, coeffs, tail: self.tail.clone() })
    }

    /// True when no coefficient is known to be non-zero and the tail is zero.
    pub fn is_certainly_constant(&self) -> bool {
        matches!(self.tail, Tail::Zero) && self.coeffs.iter().all(|(k, c)| *k == 0 || c.is_zero())
    }

    /// `ρ* = sup_{k ≥ 1} (target − v(a_k))/k`: the smallest log-radius at which
    /// `min_k (v(a_k) + kρ) ≥ target` is certified, ignoring the constant term.
    ///
    /// Returns `(ρ*, dominant)` where `dominant` says the supremum is reached by
    /// a single explicit coefficient of known valuation, strictly above every
    /// other candidate and the tail. `None` when no term of degree `≥ 1`
    /// survives.
    pub fn newton_threshold(&self, target: &BigRational) -> Option<(BigRational, bool)> {
        let mut cands: Vec<(BigRational, bool)> = Vec::new();
        for (k, c) in self.coeffs.range(1..) {
            let exact = c.val().is_some();
            let lb = rat(c.val_lower_bound(), 1);
            cands.push(((target - lb) / rat(*k as i64, 1), exact));
        }
        if let Tail::Affine { alpha, beta, .. } = &self.tail {
            let k0 = rat((self.degree + 1).max(1) as i64, 1);
            let r = if target > beta { (target - beta) / k0 - alpha } else { -alpha.clone() };
            cands.push((r, false));
        }
        let best = cands.iter().map(|(r, _)| r).max()?.clone();
        let hits: Vec<&(BigRational, bool)> = cands.iter().filter(|(r, _)| *r == best).collect();
        let dominant = hits.len() == 1 && hits[0].1;
        Some((best, dominant))
    }

    /// Binomial-series expansion of `f^(1/p^m)` for `f(0) = 1`.
    ///
    /// The explicit part is computed to the same degree as `f`. The tail bound
    /// comes from the Gauss norm of `h = f − 1` at the log-radius `ρ*` where
    /// `v_ρ*(h) = m + 1/(p−1)`: every coefficient of degree `d ≥ 1` then has
    /// valuation `≥ −ρ*·d + 1/(p−1)`. The slope is sharp when a single
    /// monomial of `h` dominates at `ρ*`, since the torsor is then non-split
    /// on the boundary ball and the root cannot converge there.
    pub fn p_power_root(&self, m: u32) -> Result<Self> {
        let p = self.p;
        let c0 = self.coeffs.get(&0).ok_or_else(|| Error::invalid("constant term must be 1, found 0"))?;
        if !(c0 - &PadicNumber::one(p, c0.prec())).is_zero() {
            return Err(Error::invalid(format!("constant term must be 1, found {c0}")));
        }
        if m == 0 {
            return Ok(self.clone());
        }
        let mut h = self.clone();
        h.coeffs.remove(&0);
        if h.coeffs.is_empty() && h.tail == Tail::Zero {
            return Ok(BoundedSeries::polynomial(p, [(0, c0.clone())]));
        }

        let degree = self.degree;
        let exponent = BigRational::new(BigInt::one(), ppow(p, m as u64));
        let rel = h.coeffs.values().map(|c| c.relative_precision()).max().unwrap_or(0).max(c0.prec()) + 1;
        let mut out: BTreeMap<usize, PadicNumber> = BTreeMap::new();
        out.insert(0, c0.clone());
        let mut hk: BTreeMap<usize, PadicNumber> = [(0usize, PadicNumber::one(p, c0.prec()))].into();
        for k in 1..=degree as u64 {
            hk = sparse_mul(&hk, &h.coeffs, degree, p);
            if hk.is_empty() {
                break;
            }
            let b = binom_rational(&exponent, k);
            let vb = super::number::vp_rational(&b, p).expect("binomial of 1/p^m is non-zero");
            let bk = PadicNumber::from_rational(p, &b, vb + rel);
            for (d, c) in &hk {
                let term = &bk * c;
                let e = out.entry(*d).or_insert_with(|| PadicNumber::zero(p, term.prec()));
                *e = &*e + &term;
            }
        }

        let target = rat(m as i64, 1) + rat(1, p as i64 - 1);
        let tail = match h.newton_threshold(&target) {
            None => Tail::Zero,
            Some((rho, dominant)) => Tail::Affine { alpha: -rho, beta: rat(1, p as i64 - 1), sharp: dominant },
        };
        Ok(BoundedSeries { p, degree, coeffs: out, tail })
    }

    /// Infimum `ρ` such that the series converges at every ball point
    /// `b_{0,ρ'}` with `ρ' > ρ`.
    ///
    /// Polynomials give `−∞`. An affine tail always certifies convergence for
    /// `ρ > −α`; the value is returned only when the tail slope is sharp,
    /// otherwise the threshold is undecidable from the data and the error
    /// carries the certified bound.
    pub fn convergence_logradius(&self) -> Result<LogRadius> {
        match &self.tail {
            Tail::Zero => Ok(ExtQ::NegInf),
            Tail::Affine { alpha, sharp: true, .. } => Ok(ExtQ::Finite(-alpha)),
            Tail::Affine { alpha, sharp: false, .. } => Err(Error::ThresholdUndecidable { upper: (-alpha).to_string() }),
        }
    }

    /// The certified upper bound on the convergence log-radius, always available.
    pub fn convergence_logradius_bound(&self) -> LogRadius {
        match &self.tail {
            Tail::Zero => ExtQ::NegInf,
            Tail::Affine { alpha, .. } => ExtQ::Finite(-alpha),
        }
    }

    /// Gauss valuation `min_k (v(a_k) + kρ)` at log-radius `ρ > −α`, as a
    /// certified lower bound together with whether it is exact.
    pub fn gauss_valuation(&self, rho: &BigRational) -> (ExtQ, bool) {
        let mut best = ExtQ::PosInf;
        let mut exact_hits = 0;
        let mut bound_hits = 0;
        let mut consider = |v: ExtQ, exact: bool| {
            match v.cmp(&best) {
                std::cmp::Ordering::Less => {
                    best = v;
                    exact_hits = exact as usize;
                    bound_hits = (!exact) as usize;
                }
                std::cmp::Ordering::Equal => {
                    if exact {
                        exact_hits += 1
                    } else {
                        bound_hits += 1
                    }
                }
                _ => {}
            }
        };
        for (k, c) in &self.coeffs {
            let v = rat(c.val_lower_bound(), 1) + rho * rat(*k as i64, 1);
            consider(ExtQ::Finite(v), c.val().is_some());
        }
        if let Tail::Affine { alpha, beta, .. } = &self.tail {
            let slope = alpha + rho;
            if slope.is_negative() {
                consider(ExtQ::NegInf, false);
            } else {
                let k0 = rat(self.degree as i64 + 1, 1);
                consider(ExtQ::Finite(slope * k0 + beta), false);
            }
        }
        let exact = exact_hits == 1 && bound_hits == 0;
        (best, exact)
    }
}

/// Sparse product truncated at `degree`.
pub(crate) fn sparse_mul(
    a: &BTreeMap<usize, PadicNumber>,
    b: &BTreeMap<usize, PadicNumber>,
    degree: usize,
    p: u64,
) -> BTreeMap<usize, PadicNumber> {
    let mut out: BTreeMap<usize, PadicNumber> = BTreeMap::new();
    for (i, x) in a {
        if *i > degree {
            break;
        }
        for (j, y) in b.range(..=degree - i) {
            let t = x * y;
            let e = out.entry(i + j).or_insert_with(|| PadicNumber::zero(p, t.prec()));
            *e = &*e + &t;
        }
    }
    out
}

/// Wire form: `{"p": int, "coeffs": [PadicNumber | null, ...], "tail": {"alpha", "beta", "sharp"} | null}`.
/// A `null` coefficient is an exact zero, a `null` tail means a polynomial.
#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    p: u64,
    coeffs: Vec<Option<PadicNumber>>,
    tail: Option<TailRepr>,
}

#[derive(Serialize, Deserialize)]
struct TailRepr {
    #[serde(with = "crate::ext::rational_str")]
    alpha: BigRational,
    #[serde(with = "crate::ext::rational_str")]
    beta: BigRational,
    #[serde(default)]
    sharp: bool,
}

impl Serialize for BoundedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = (0..=self.degree).map(|k| self.coeffs.get(&k).cloned()).collect();
        let tail = match &self.tail {
            Tail::Zero => None,
            Tail::Affine { alpha, beta, sharp } => Some(TailRepr { alpha: alpha.clone(), beta: beta.clone(), sharp: *sharp }),
        };
        SeriesRepr { p: self.p, coeffs, tail }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoundedSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SeriesRepr::deserialize(d)?;
        let degree = r.coeffs.len().saturating_sub(1);
        let coeffs = r.coeffs.into_iter().enumerate().filter_map(|(k, c)| c.map(|c| (k, c))).collect();
        let tail = match r.tail {
            None => Tail::Zero,
            Some(t) => Tail::Affine { alpha: t.alpha, beta: t.beta, sharp: t.sharp },
        };
        BoundedSeries::new(r.p, degree, coeffs, tail).map_err(D::Error::custom)
    }
}

/// `1 + c·X^e` with `c` an exact rational.
pub fn one_plus_monomial(p: u64, c: &BigRational, e: usize, prec: i64) -> BoundedSeries {
    BoundedSeries::from_rationals(p, &[(0, rat(1, 1)), (e, c.clone())], prec)
}

/// `Σ_{k ≥ 0} c^k X^k` truncated at `degree` with the exact (sharp) tail.
pub fn geometric(p: u64, c: &BigRational, degree: usize, prec: i64) -> BoundedSeries {
    let vc = super::number::vp_rational(c, p).expect("ratio must be non-zero");
    let mut coeffs = BTreeMap::new();
    let mut ck = rat(1, 1);
    for k in 0..=degree {
        coeffs.insert(k, PadicNumber::from_rational(p, &ck, prec + vc * k as i64));
        ck *= c;
    }
    BoundedSeries { p, degree, coeffs, tail: Tail::Affine { alpha: rat_int(vc), beta: BigRational::zero(), sharp: true } }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::binom::vp_factorial;

    #[test]
    fn constant_root_is_one() {
        let f = BoundedSeries::polynomial(3, [(0, PadicNumber::one(3, 20))]);
        let r = f.p_power_root(4).unwrap();
        assert_eq!(r.coeff(0), Some(&PadicNumber::one(3, 20)));
        assert_eq!(r.tail(), &Tail::Zero);
        assert_eq!(r.convergence_logradius().unwrap(), ExtQ::NegInf);
    }

    #[test]
    fn geometric_and_p_power_radii() {
        let g = geometric(5, &rat(1, 1), 10, 30);
        assert_eq!(g.convergence_logradius().unwrap(), ExtQ::int(0));
        let g = geometric(5, &rat(5, 1), 10, 30);
        assert_eq!(g.convergence_logradius().unwrap(), ExtQ::int(-1));
    }

    #[test]
    fn root_of_one_plus_xn_has_binomial_valuations() {
        for p in [2u64, 3, 5] {
            for n in 2..=5u32 {
                let nn = 2usize;
                let f = BoundedSeries { degree: 24, ..one_plus_monomial(p, &rat(1, 1), nn, 64) };
                let r2 = f.p_power_root(n - 1).unwrap();
                for k in 1..=12usize {
                    let c = r2.coeff(nn * k).unwrap();
                    let expect = -(k as i64) * (n as i64 - 1) - vp_factorial(k as u64, p) as i64;
                    assert_eq!(c.val(), Some(expect), "p={p} n={n} k={k}");
                    assert!(r2.coeff(nn * k - 1).is_none());
                }
            }
        }
    }

    #[test]
    fn root_radius_of_model_case() {
        // (1 + X^N)^(1/p^(n-1)) converges exactly for ρ > (n−1 + 1/(p−1))/N.
        let f = BoundedSeries { degree: 16, ..one_plus_monomial(3, &rat(1, 1), 2, 64) };
        let r = f.p_power_root(2).unwrap();
        assert_eq!(r.convergence_logradius().unwrap(), ExtQ::frac(5, 4));
    }

    #[test]
    fn non_dominant_threshold_is_undecidable() {
        // (1+X)^p has root 1+X; the data cannot see that, and must not claim a radius.
        let p = 3u64;
        let f = BoundedSeries::from_rationals(p, &[(0, rat(1, 1)), (1, rat(3, 1)), (2, rat(3, 1)), (3, rat(1, 1))], 40);
        let r = f.p_power_root(1).unwrap();
        match r.convergence_logradius() {
            Err(Error::ThresholdUndecidable { upper }) => assert_eq!(upper, "1/2"),
            other => panic!("expected undecidable, got {other:?}"),
        }
    }

    #[test]
    fn constant_term_must_be_one() {
        let f = BoundedSeries::from_rationals(5, &[(0, rat(2, 1)), (1, rat(1, 1))], 20);
        assert!(f.p_power_root(1).is_err());
    }

    #[test]
    fn serde_keeps_sparse_structure() {
        let f = BoundedSeries { degree: 4, ..one_plus_monomial(5, &rat(1, 5), 3, 10) };
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("null"));
        let g: BoundedSeries = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }
}
