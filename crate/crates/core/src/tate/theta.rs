//! Theta products `f_{Γ'}(z) = Π_{g ∈ Γ'} f(g z)/f(g z0)` for `Γ' = q^{lZ}`.

use serde::Serialize;

use super::alpha::{FactoredFunction, Root};
use super::TateCurve;
use crate::error::{Error, Result};
use crate::padic::PadicNumber;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaValue {
    pub value: PadicNumber,
    /// The relative error of the truncated product has valuation at least this.
    pub err_val: i64,
}

/// `Π_{|k| ≤ M} f(q^{lk} z)/f(q^{lk} z0)`.
///
/// Convergence needs `f(0)` and `f(∞)` finite and non-zero up to the scalar,
/// i.e. no `x^m` part and total multiplicity 0.
pub fn theta_product(
    f: &FactoredFunction,
    tc: &TateCurve,
    l: u64,
    z: &PadicNumber,
    z0: &PadicNumber,
    big_m: u64,
) -> Result<ThetaValue> {
    if l == 0 {
        return Err(Error::invalid("l must be positive"));
    }
    if f.spine_exponent != 0 || f.factors.iter().map(|(_, k)| k).sum::<i64>() != 0 {
        return Err(Error::invalid("theta product needs f = Π (x − a_i)^{k_i} with Σ k_i = 0"));
    }
    let (vz, vz0) = match (z.val(), z0.val()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::PoleCollision("z or z0 is 0".into())),
    };
    let mut vroots = Vec::new();
    for (r, k) in &f.factors {
        if *k == 0 {
            continue;
        }
        let a = f.root_value(r, tc);
        let va = a.val().ok_or_else(|| Error::invalid(format!("root {r:?} is 0; use the x^m part")))?;
        vroots.push(va);
    }
    let Some(&vmax) = vroots.iter().max() else {
        return Ok(ThetaValue { value: PadicNumber::one(tc.p(), tc.prec()), err_val: tc.prec() });
    };
    let vmin = *vroots.iter().min().unwrap();
    let reach = l as i64 * (big_m as i64 + 1) * tc.vq();
    let err = (reach + vz.min(vz0) - vmax).min(reach + vmin - vz.max(vz0));
    if err <= 0 {
        return Err(Error::TailNotCertified(format!("M = {big_m} too small (bound {err})")));
    }
    let mut acc = PadicNumber::one(tc.p(), tc.prec());
    let m = big_m as i64;
    for k in -m..=m {
        let g = tc.q_pow(l as i64 * k);
        let num = f.eval(tc, &(&g * z)).map_err(|_| Error::PoleCollision(format!("q^{} z meets a root", l as i64 * k)))?;
        let den = f.eval(tc, &(&g * z0)).map_err(|_| Error::PoleCollision(format!("q^{} z0 meets a root", l as i64 * k)))?;
        acc = &acc * &num.checked_div(&den)?;
    }
    Ok(ThetaValue { value: acc, err_val: err })
}

/// Ratios `f_{Γ'}(q^l z)/f_{Γ'}(z)` at the sample points, their common
/// certified relative error, and whether they agree pairwise within it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Automorphy {
    pub ratios: Vec<PadicNumber>,
    pub err_val: i64,
    pub agree: bool,
}

pub fn theta_automorphy(
    f: &FactoredFunction,
    tc: &TateCurve,
    l: u64,
    zs: &[PadicNumber],
    z0: &PadicNumber,
    big_m: u64,
) -> Result<Automorphy> {
    let ql = tc.q_pow(l as i64);
    let mut ratios = Vec::new();
    let mut err = i64::MAX;
    for z in zs {
        let a = theta_product(f, tc, l, &(&ql * z), z0, big_m)?;
        let b = theta_product(f, tc, l, z, z0, big_m)?;
        err = err.min(a.err_val).min(b.err_val);
        ratios.push(a.value.checked_div(&b.value)?);
    }
    // Digits lost in the arithmetic count against the certificate too.
    for r in &ratios {
        err = err.min(r.relative_precision());
    }
    let agree = ratios.windows(2).all(|w| {
        let d = &w[0] - &w[1];
        w[0].val().is_some_and(|v| d.val_lower_bound() >= v + err)
    });
    Ok(Automorphy { ratios, err_val: err, agree })
}

/// `Π (x − a_i)^{k_i}` with roots given explicitly, for tests and the CLI.
pub fn from_roots(roots: Vec<(PadicNumber, i64)>) -> FactoredFunction {
    FactoredFunction::new(0, roots.into_iter().map(|(a, k)| (Root::Value(a), k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tc() -> TateCurve {
        TateCurve::new(PadicNumber::p_power(5, 1, 80)).unwrap()
    }

    fn pn(n: i64) -> PadicNumber {
        PadicNumber::from_int(5, n, 80)
    }

    #[test]
    fn constant_and_normalized() {
        let t = tc();
        let f = FactoredFunction::constant();
        assert_eq!(theta_product(&f, &t, 1, &pn(2), &pn(3), 4).unwrap().value, PadicNumber::one(5, 80));
        let f = from_roots(vec![(pn(2), 1), (pn(3), -1)]);
        let v = theta_product(&f, &t, 2, &pn(7), &pn(7), 4).unwrap();
        assert!((&v.value - &PadicNumber::one(5, 80)).is_zero());
    }

    #[test]
    fn automorphy_holds() {
        let t = tc();
        let f = from_roots(vec![(pn(2), 1), (pn(3), -1)]);
        let a = theta_automorphy(&f, &t, 1, &[pn(4), pn(6), pn(11)], &pn(8), 6).unwrap();
        assert!(a.agree, "{a:?}");
        assert!(a.err_val >= 6);
    }

    #[test]
    fn unbalanced_is_rejected() {
        let f = from_roots(vec![(pn(2), 1)]);
        assert!(theta_product(&f, &tc(), 1, &pn(4), &pn(6), 3).is_err());
    }
}
