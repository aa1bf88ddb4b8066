//! Parsers for the compact value syntax accepted on the command line.

use num_bigint::BigInt;
use num_rational::BigRational;

use berkolab_core::ext::parse_rational;
use berkolab_core::padic::ppow;
use berkolab_core::PadicNumber;

/// Reads `p`, `p^k`, `c*p^k`, `-p^k` or a rational `a/b` as an element of `Q_p`.
pub fn padic(s: &str, p: u64, prec: i64) -> Result<PadicNumber, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot read {s:?} as p, p^k, c*p^k or a rational");
    let (coef, power) = match s.split_once('*') {
        Some((c, pw)) => (parse_rational(c).map_err(|_| bad())?, Some(pw.to_string())),
        None if s.contains('p') => match s.strip_prefix('-') {
            Some(rest) => (BigRational::from_integer((-1).into()), Some(rest.to_string())),
            None => (BigRational::from_integer(1.into()), Some(s.clone())),
        },
        None => (parse_rational(&s).map_err(|_| bad())?, None),
    };
    let k: i64 = match power.as_deref() {
        None => 0,
        Some("p") => 1,
        Some(pw) => {
            let e = pw.strip_prefix("p^").ok_or_else(bad)?;
            let e = e.trim_start_matches('(').trim_end_matches(')');
            e.parse().map_err(|_| bad())?
        }
    };
    let pk = BigRational::from_integer(ppow(p, k.unsigned_abs()));
    let value = if k >= 0 { coef * pk } else { coef / pk };
    Ok(PadicNumber::from_rational(p, &value, prec))
}

/// Reads `a:k,b:k` pairs.
pub fn pairs<'a>(s: &'a str) -> Result<Vec<(&'a str, i64)>, String> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (a, k) = t.trim().rsplit_once(':').ok_or_else(|| format!("expected value:multiplicity, got {t:?}"))?;
            let k = k.trim().parse().map_err(|_| format!("bad multiplicity in {t:?}"))?;
            Ok((a.trim(), k))
        })
        .collect()
}

pub fn integers(s: &str) -> Result<Vec<BigInt>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| format!("bad integer {t:?}")))
        .collect()
}
