//! Exact rational linear algebra with p-adic pivot certification.
//!
//! Matrices hold exact rationals, but every entry is also read as a p-adic
//! number known to a fixed relative precision. Elimination tracks a lower
//! bound on the valuation of the error each entry would carry, and a pivot
//! is accepted only if its valuation is strictly below that bound. This is
//! what makes a rank computed here a rank "at working precision".

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::vp_rational;

pub type Matrix = Vec<Vec<BigRational>>;

fn vp(q: &BigRational, p: u64) -> Option<i64> {
    vp_rational(q, p)
}

/// Outcome of a certified rank computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank: usize,
    /// Smallest `err − v(pivot)` over accepted pivots; positive by construction.
    pub min_margin: Option<i64>,
}

/// Rank with minimal-valuation pivoting.
///
/// Each row is first scaled so its smallest entry valuation is 0; entries are
/// then taken to be known to absolute precision `prec`. Exact zeros stay exact.
pub fn certified_rank(m: &Matrix, p: u64, prec: i64) -> Result<RankCertificate> {
    let mut rows: Vec<Vec<(BigRational, Option<i64>)>> = Vec::new();
    for r in m {
        let vmin = r.iter().filter_map(|q| vp(q, p)).min();
        let Some(vmin) = vmin else { continue };
        let scale = crate::ext::rat(1, 1) * pow_p(p, -vmin);
        rows.push(r.iter().map(|q| {
            let s = q * &scale;
            let err = if s.is_zero() { None } else { Some(prec) };
            (s, err)
        }).collect());
    }
    let ncols = m.first().map_or(0, |r| r.len());
    let mut used_cols = vec![false; ncols];
    let mut rank = 0;
    let mut min_margin: Option<i64> = None;
    let mut live: Vec<usize> = (0..rows.len()).collect();
    loop {
        // Pick the certified entry of smallest valuation.
        let mut best: Option<(i64, usize, usize)> = None;
        let mut uncertified: Option<(i64, i64)> = None;
        for &i in &live {
            for j in 0..ncols {
                if used_cols[j] {
                    continue;
                }
                let (q, err) = &rows[i][j];
                let Some(v) = vp(q, p) else { continue };
                let e = err.unwrap_or(i64::MAX);
                if v < e {
                    if best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                } else if uncertified.is_none() {
                    uncertified = Some((v, e));
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            if let Some((v, e)) = uncertified {
                return Err(Error::IllConditioned { prec, pivot_val: v.to_string(), err_val: e.to_string() });
            }
            break;
        };
        let e_piv = rows[pi][pj].1.unwrap_or(i64::MAX);
        let margin = e_piv.saturating_sub(v);
        min_margin = Some(min_margin.map_or(margin, |m: i64| m.min(margin)));
        rank += 1;
        used_cols[pj] = true;
        live.retain(|&i| i != pi);
        let (piv, piv_err) = rows[pi][pj].clone();
        let prow = rows[pi].clone();
        for &i in &live {
            let (a_ij, a_err) = rows[i][pj].clone();
            if a_ij.is_zero() && a_err.is_none() {
                continue;
            }
            let factor = &a_ij / &piv;
            let lb_a = lower_bound(&a_ij, a_err, p);
            // err(a/piv) ≥ min(err(a) − v(piv), lb(a) + err(piv) − 2 v(piv))
            let f_err = min_opt(a_err.map(|e| e - v), piv_err.map(|e| lb_a.saturating_add(e) - 2 * v));
            let lb_f = lower_bound(&factor, f_err, p);
            for j in 0..ncols {
                let (b, b_err) = &prow[j];
                let lb_b = lower_bound(b, *b_err, p);
                let prod_err = min_opt(b_err.map(|e| lb_f.saturating_add(e)), f_err.map(|e| e.saturating_add(lb_b)));
                let prod_err = if b.is_zero() && b_err.is_none() { None } else { prod_err };
                let entry = &mut rows[i][j];
                entry.0 = &entry.0 - &factor * b;
                entry.1 = min_opt(entry.1, prod_err);
            }
            rows[i][pj] = (BigRational::zero(), None);
        }
    }
    Ok(RankCertificate { rank, min_margin })
}

fn lower_bound(q: &BigRational, err: Option<i64>, p: u64) -> i64 {
    match (vp(q, p), err) {
        (Some(v), Some(e)) => v.min(e),
        (Some(v), None) => v,
        (None, Some(e)) => e,
        (None, None) => i64::MAX / 4,
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn pow_p(p: u64, k: i64) -> BigRational {
    let b = BigRational::from_integer(crate::padic::ppow(p, k.unsigned_abs()));
    if k >= 0 {
        b
    } else {
        b.recip()
    }
}

/// Exact rank over `Q`.
pub fn rank(m: &Matrix) -> usize {
    rref(m).1.len()
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(k) = (r..nrows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, k);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let row_r = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(row_r.iter()) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Basis of `{x : m x = 0}` for a matrix with `ncols` columns.
pub fn nullspace(m: &Matrix, ncols: usize) -> Vec<Vec<BigRational>> {
    let (r, pivots) = rref(m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r[row][free].clone();
        }
        basis.push(v);
    }
    basis
}
