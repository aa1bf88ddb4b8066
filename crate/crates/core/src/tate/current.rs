//! Currents on the tree of `G_m/q^Z`: values on cusp edges `e_j` (the end at
//! `q^j`) and spine edges `e'_j` (from the vertex of `e_j` to that of `e_{j+1}`),
//! subject to `c(e'_{j+1}) = c(e'_j) + c(e_{j+1})`.
//!
//! A current is stored on a window `[jmin, jmax]` and is either periodic with
//! that window as one period, or window-supported: outside the window every
//! cusp value is 0 and the spine is constant on each side.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::ppow;

/// Coefficient ring of a current.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ring {
    Z,
    /// `Z_p` represented by integers modulo `p^prec`.
    Zp { p: u64, prec: u32 },
    ZmodN(u64),
}

impl Ring {
    fn reduce(&self, x: &BigInt) -> BigInt {
        match self {
            Ring::Z => x.clone(),
            Ring::Zp { p, prec } => x.mod_floor(&ppow(*p, *prec as u64)),
            Ring::ZmodN(n) => x.mod_floor(&BigInt::from(*n)),
        }
    }

    pub fn tag(&self) -> String {
        match self {
            Ring::Z => "Z".into(),
            Ring::Zp { .. } => "Zp".into(),
            Ring::ZmodN(n) => format!("Z/{n}Z"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Current {
    ring: Ring,
    period: Option<u64>,
    jmin: i64,
    jmax: i64,
    cusp: BTreeMap<i64, BigInt>,
    spine: BTreeMap<i64, BigInt>,
}

impl Current {
    /// Window-supported current; values are reduced into the ring, missing entries are 0.
    pub fn windowed(ring: Ring, jmin: i64, jmax: i64, cusp: BTreeMap<i64, BigInt>, spine: BTreeMap<i64, BigInt>) -> Result<Self> {
        Self::build(ring, None, jmin, jmax, cusp, spine)
    }

    /// Periodic current with period `jmax − jmin + 1`.
    pub fn periodic(ring: Ring, jmin: i64, jmax: i64, cusp: BTreeMap<i64, BigInt>, spine: BTreeMap<i64, BigInt>) -> Result<Self> {
        let l = jmax - jmin + 1;
        Self::build(ring, Some(l as u64), jmin, jmax, cusp, spine)
    }

    fn build(
        ring: Ring,
        period: Option<u64>,
        jmin: i64,
        jmax: i64,
        cusp: BTreeMap<i64, BigInt>,
        spine: BTreeMap<i64, BigInt>,
    ) -> Result<Self> {
        if jmax < jmin {
            return Err(Error::invalid(format!("empty window [{jmin}, {jmax}]")));
        }
        for k in cusp.keys().chain(spine.keys()) {
            if *k < jmin || *k > jmax {
                return Err(Error::invalid(format!("index {k} outside window [{jmin}, {jmax}]")));
            }
        }
        let clean = |m: BTreeMap<i64, BigInt>| -> BTreeMap<i64, BigInt> {
            m.into_iter().map(|(k, v)| (k, ring.reduce(&v))).filter(|(_, v)| !v.is_zero()).collect()
        };
        let cusp = clean(cusp);
        let spine = clean(spine);
        Ok(Current { ring, period, jmin, jmax, cusp, spine })
    }

    /// Window-supported current from cusp values and `c(e'_{jmin})`; the
    /// spine is filled in by the edge relation.
    pub fn from_cusps(ring: Ring, jmin: i64, jmax: i64, cusp: &BTreeMap<i64, BigInt>, spine_at_jmin: BigInt) -> Result<Self> {
        let mut spine = BTreeMap::new();
        let mut s = spine_at_jmin;
        for j in jmin..=jmax {
            if j > jmin {
                s += cusp.get(&j).cloned().unwrap_or_default();
            }
            spine.insert(j, s.clone());
        }
        Self::windowed(ring, jmin, jmax, cusp.clone(), spine)
    }

    /// `c0`: cusp values 0, spine values 1, so `α(c0) = x`.
    pub fn c0(ring: Ring) -> Self {
        Self::windowed(ring, 0, 0, BTreeMap::new(), [(0, BigInt::from(1))].into()).expect("valid window")
    }

    pub fn zero(ring: Ring) -> Self {
        Self::windowed(ring, 0, 0, BTreeMap::new(), BTreeMap::new()).expect("valid window")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn period(&self) -> Option<u64> {
        self.period
    }

    pub fn window(&self) -> (i64, i64) {
        (self.jmin, self.jmax)
    }

    fn stored(map: &BTreeMap<i64, BigInt>, j: i64) -> BigInt {
        map.get(&j).cloned().unwrap_or_default()
    }

    fn fold(&self, j: i64) -> i64 {
        let l = self.period.expect("periodic") as i64;
        self.jmin + (j - self.jmin).rem_euclid(l)
    }

    /// `c(e_j)`.
    pub fn cusp(&self, j: i64) -> BigInt {
        match self.period {
            Some(_) => Self::stored(&self.cusp, self.fold(j)),
            None if j < self.jmin || j > self.jmax => BigInt::zero(),
            None => Self::stored(&self.cusp, j),
        }
    }

    /// `c(e'_j)`.
    pub fn spine(&self, j: i64) -> BigInt {
        match self.period {
            Some(_) => Self::stored(&self.spine, self.fold(j)),
            None if j > self.jmax => Self::stored(&self.spine, self.jmax),
            None if j < self.jmin => {
                self.ring.reduce(&(Self::stored(&self.spine, self.jmin) - Self::stored(&self.cusp, self.jmin)))
            }
            None => Self::stored(&self.spine, j),
        }
    }

    /// Indices `j` with `c(e_j) ≠ 0` inside the window.
    pub fn cusp_support(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.cusp.iter().map(|(k, v)| (*k, v))
    }

    /// Checks the edge relation on the window (and across the period boundary).
    pub fn validate(&self) -> Result<()> {
        let last = match self.period {
            Some(_) => self.jmax,
            None => self.jmax - 1,
        };
        for j in self.jmin..=last {
            let lhs = self.spine(j + 1);
            let rhs = self.ring.reduce(&(self.spine(j) + self.cusp(j + 1)));
            if lhs != rhs {
                return Err(Error::CurrentViolation(j));
            }
        }
        Ok(())
    }

    /// Indices covering both currents' windows, plus one step on each side.
    fn joint_range(&self, other: &Current) -> (i64, i64) {
        (self.jmin.min(other.jmin) - 1, self.jmax.max(other.jmax) + 1)
    }

    pub fn add(&self, other: &Current) -> Result<Current> {
        if self.ring != other.ring {
            return Err(Error::invalid("currents over different rings"));
        }
        match (self.period, other.period) {
            (None, None) => {
                let (lo, hi) = (self.jmin.min(other.jmin), self.jmax.max(other.jmax));
                let cusp = (lo..=hi).map(|j| (j, self.cusp(j) + other.cusp(j))).collect();
                let spine = (lo..=hi).map(|j| (j, self.spine(j) + other.spine(j))).collect();
                Current::windowed(self.ring.clone(), lo, hi, cusp, spine)
            }
            (Some(a), Some(b)) => {
                let l = a.lcm(&b) as i64;
                let lo = self.jmin;
                let cusp = (lo..lo + l).map(|j| (j, self.cusp(j) + other.cusp(j))).collect();
                let spine = (lo..lo + l).map(|j| (j, self.spine(j) + other.spine(j))).collect();
                Current::periodic(self.ring.clone(), lo, lo + l - 1, cusp, spine)
            }
            _ => Err(Error::invalid("cannot add a periodic and a window-supported current")),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Current {
        let f = |m: &BTreeMap<i64, BigInt>| m.iter().map(|(j, v)| (*j, v * k)).collect();
        Current::build(self.ring.clone(), self.period, self.jmin, self.jmax, f(&self.cusp), f(&self.spine))
            .expect("same window")
    }

    pub fn neg(&self) -> Current {
        self.scale(&BigInt::from(-1))
    }

    /// Same values on every edge.
    pub fn same_as(&self, other: &Current) -> bool {
        if self.ring != other.ring || self.period.is_some() != other.period.is_some() {
            return false;
        }
        let (lo, hi) = match (self.period, other.period) {
            (Some(a), Some(b)) => (self.jmin, self.jmin + a.lcm(&b) as i64 - 1),
            _ => self.joint_range(other),
        };
        (lo..=hi).all(|j| self.cusp(j) == other.cusp(j) && self.spine(j) == other.spine(j))
    }
}

impl PartialEq for Current {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

/// `μ(n)` by trial division.
pub fn moebius(n: u64) -> i64 {
    assert!(n >= 1);
    let mut m = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// `c_n` with cusp values `μ(j/n)` at `j ≡ 0 mod n`, cut after cusp index `w`.
pub fn moebius_current_upto(n: u64, w: i64) -> Current {
    assert!(n >= 1);
    let w = w.max(0);
    let mut cusp = BTreeMap::new();
    let mut spine = BTreeMap::new();
    let mut s = 0i64;
    for j in 1..=w {
        if j as u64 % n == 0 {
            let m = moebius(j as u64 / n);
            cusp.insert(j, BigInt::from(m));
            s += m;
        }
        spine.insert(j, BigInt::from(s));
    }
    Current::windowed(Ring::Z, 0, w, cusp, spine).expect("valid window")
}

/// `c_n` on the window `[0, J·n]`.
pub fn moebius_current(n: u64, big_j: u64) -> Current {
    moebius_current_upto(n, (big_j * n) as i64)
}

/// Wire form: `{"ring": "Z"|"Zp"|"Z/nZ", "p"?, "prec"?, "period": int|null,
/// "window": [jmin, jmax], "cusp": {"j": "v"}, "spine": {"j": "v"}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurrentRepr {
    pub ring: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prec: Option<u32>,
    #[serde(default)]
    pub period: Option<u64>,
    pub window: [i64; 2],
    #[serde(default)]
    pub cusp: BTreeMap<String, IntRepr>,
    #[serde(default)]
    pub spine: BTreeMap<String, IntRepr>,
}

/// Integer given as a JSON number or a decimal string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntRepr {
    Num(i64),
    Str(String),
}

impl IntRepr {
    fn value(&self) -> Result<BigInt> {
        match self {
            IntRepr::Num(n) => Ok(BigInt::from(*n)),
            IntRepr::Str(s) => s.trim().parse().map_err(|_| Error::invalid(format!("bad integer '{s}'"))),
        }
    }
}

fn parse_ring(tag: &str, p: Option<u64>, prec: Option<u32>) -> Result<Ring> {
    match tag {
        "Z" => Ok(Ring::Z),
        "Zp" => Ok(Ring::Zp {
            p: p.ok_or_else(|| Error::invalid("ring Zp needs \"p\""))?,
            prec: prec.unwrap_or(crate::DEFAULT_PRECISION as u32),
        }),
        t if t.starts_with("Z/") && t.ends_with('Z') => {
            let n: u64 = t[2..t.len() - 1].parse().map_err(|_| Error::invalid(format!("bad ring '{t}'")))?;
            if n < 2 {
                return Err(Error::invalid("Z/nZ needs n >= 2"));
            }
            Ok(Ring::ZmodN(n))
        }
        t => Err(Error::invalid(format!("unknown ring '{t}'"))),
    }
}

impl Current {
    pub fn from_repr(r: &CurrentRepr) -> Result<Current> {
        let ring = parse_ring(&r.ring, r.p, r.prec)?;
        let conv = |m: &BTreeMap<String, IntRepr>| -> Result<BTreeMap<i64, BigInt>> {
            m.iter()
                .map(|(k, v)| {
                    let j: i64 = k.trim().parse().map_err(|_| Error::invalid(format!("bad index '{k}'")))?;
                    Ok((j, v.value()?))
                })
                .collect()
        };
        let [jmin, jmax] = r.window;
        let (cusp, spine) = (conv(&r.cusp)?, conv(&r.spine)?);
        match r.period {
            None => Current::windowed(ring, jmin, jmax, cusp, spine),
            Some(l) => {
                if jmax - jmin + 1 != l as i64 {
                    return Err(Error::invalid(format!("period {l} does not match window [{jmin}, {jmax}]")));
                }
                Current::periodic(ring, jmin, jmax, cusp, spine)
            }
        }
    }

    pub fn to_repr(&self) -> CurrentRepr {
        let (p, prec) = match self.ring {
            Ring::Zp { p, prec } => (Some(p), Some(prec)),
            _ => (None, None),
        };
        let conv = |m: &BTreeMap<i64, BigInt>| m.iter().map(|(k, v)| (k.to_string(), IntRepr::Str(v.to_string()))).collect();
        CurrentRepr {
            ring: self.ring.tag(),
            p,
            prec,
            period: self.period,
            window: [self.jmin, self.jmax],
            cusp: conv(&self.cusp),
            spine: conv(&self.spine),
        }
    }
}

impl Serialize for Current {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Current {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CurrentRepr::deserialize(d)?;
        Current::from_repr(&r).map_err(serde::de::Error::custom)
    }
}
