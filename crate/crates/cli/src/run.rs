//! Dispatch of one subcommand to the library and rendering of its result.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use berkolab_core::berkovich::{BallPoint, EvalPoint, PointValue};
use berkolab_core::ext::{rat, ExtQ};
use berkolab_core::padic::{is_prime, BoundedSeries};
use berkolab_core::poles::{self, PoleFamily, PoleFamilyRepr, QuadRepr};
use berkolab_core::skeleton::{random, tower_separation, GraphPoint, Tower, TowerFile};
use berkolab_core::tate::{self, Current, DeltaValue, Ring, TateCurve};
use berkolab_core::torsor::{self, RamifiedGerm};
use berkolab_core::{Error, ErrorKind, PadicNumber};

use crate::args::*;
use crate::parse;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Core(e) => match e.kind() {
                ErrorKind::Invalid => 2,
                ErrorKind::Precision => 3,
                ErrorKind::Math => 4,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "usage",
            3 => "precision",
            _ => "math",
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

type Out = Result<Value, Failure>;

fn usage<T>(m: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(m.into()))
}

fn prime(p: u64) -> Result<(), Failure> {
    if is_prime(p) {
        Ok(())
    } else {
        usage(format!("p = {p} is not prime"))
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).or_else(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).or_else(|e| usage(format!("{}: {e}", path.display())))
}

/// A file path, or the JSON itself when the argument starts with `{`.
fn inline_or_file<T: DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    if arg.trim_start().starts_with('{') {
        serde_json::from_str(arg).or_else(|e| usage(format!("inline JSON: {e}")))
    } else {
        read_json(Path::new(arg))
    }
}

fn padic(s: &str, p: u64, prec: i64) -> Result<PadicNumber, Failure> {
    parse::padic(s, p, prec).map_err(Failure::Usage)
}

fn tate_curve(p: u64, q: &str, prec: i64) -> Result<TateCurve, Failure> {
    prime(p)?;
    Ok(TateCurve::new(padic(q, p, prec)?)?)
}

pub fn dispatch(cli: &Cli) -> Out {
    if cli.prec <= 0 {
        return usage("--prec must be positive");
    }
    let prec = cli.prec;
    match &cli.command {
        Command::SplittingRadius(a) => splitting_radius(a, prec),
        Command::AsGenus(a) => {
            prime(a.p)?;
            Ok(json!(torsor::artin_schreier_certificate(a.e, a.p)?))
        }
        Command::OrderSet(a) => order_set(a, prec),
        Command::FindOrder(a) => find_order(a, prec, cli.seed),
        Command::Current(a) => current(a, prec),
        Command::MoebiusCheck(a) => moebius_check(a, prec),
        Command::PolyEval(a) => poly_eval(a, prec),
        Command::Theta(a) => theta(a, prec),
        Command::LadderOrd(a) => ladder(a, prec),
        Command::SkeletonTower(a) => skeleton(a, cli.seed),
    }
}

fn splitting_radius(a: &SplittingRadius, prec: i64) -> Out {
    prime(a.p)?;
    let series: BoundedSeries = match (&a.series, a.big_n) {
        (Some(path), _) => read_json(path)?,
        (None, Some(n)) if n > 0 => BoundedSeries::polynomial(
            a.p,
            [(0, PadicNumber::one(a.p, prec)), (n as usize, PadicNumber::one(a.p, prec))],
        ),
        _ => return usage("give --N (positive) or --series"),
    };
    if series.p() != a.p {
        return Err(Error::PrimeMismatch(a.p, series.p()).into());
    }
    let germ = RamifiedGerm::new(series)?;
    let e0 = germ.e0();
    let closed = torsor::splitting_logradius_exact(e0 as u32, a.n, a.p);
    let cert = torsor::artin_schreier_certificate(e0 as u64, a.p)?;
    let mut out = json!({
        "e0": e0,
        "genus": cert.genus,
        "genus_flag": cert.forces_vertex,
    });
    if a.numeric || a.series.is_some() {
        let numeric = torsor::splitting_logradius_numeric(&germ, a.n)?;
        out["method"] = json!("newton-polygon");
        out["logradius"] = json!(numeric.to_string());
        if a.series.is_none() {
            out["closed_form"] = json!(closed.to_string());
            out["agrees"] = json!(numeric == ExtQ::Finite(closed));
        }
    } else {
        out["method"] = json!("closed-form");
        out["logradius"] = json!(closed.to_string());
    }
    Ok(out)
}

fn order_set(a: &OrderSet, prec: i64) -> Out {
    let mut repr: PoleFamilyRepr = inline_or_file(&a.poles)?;
    prime(repr.p)?;
    if let Some(x) = &a.x {
        repr.x = QuadRepr::Rational(x.clone());
    }
    let fam = PoleFamily::from_repr(&repr)?;
    let res = poles::order_set(&fam, a.nmax, prec)?;
    Ok(json!({
        "family": fam.to_repr(),
        "nonppower_orders": poles::nonppower_orders(&res.e_window, fam.p()),
        "density_violation": res.density_violation(),
        "result": res,
    }))
}

fn find_order(a: &FindOrder, prec: i64, seed: u64) -> Out {
    prime(a.p)?;
    let fam = match &a.poles {
        Some(s) => {
            let repr: PoleFamilyRepr = inline_or_file(s)?;
            if repr.p != a.p {
                return usage(format!("family is over p = {}, not {}", repr.p, a.p));
            }
            PoleFamily::from_repr(&repr)?
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked = Vec::new();
            while picked.len() < a.count {
                let q = rat(rng.gen_range(-40..=40), rng.gen_range(1..=9));
                if q != rat(0, 1) && !picked.contains(&q) {
                    picked.push(q);
                }
            }
            PoleFamily::rational(a.p, &picked, &rat(0, 1))?
        }
    };
    let comb = poles::find_nonppower_order(&fam, a.nmax, prec)?;
    Ok(json!({ "family": fam.to_repr(), "combination": comb }))
}

fn load_current(s: &CurrentSource) -> Result<Current, Failure> {
    let given = [s.file.is_some(), s.cusps.is_some(), s.moebius.is_some()].iter().filter(|b| **b).count();
    if given != 1 {
        return usage("give exactly one of --file, --cusps, --moebius");
    }
    if let Some(path) = &s.file {
        return read_json(path);
    }
    if let Some(n) = s.moebius {
        if n == 0 {
            return usage("--moebius must be positive");
        }
        return Ok(tate::moebius_current(n, s.big_j));
    }
    let mut cusp = BTreeMap::new();
    for (j, c) in parse::pairs(s.cusps.as_deref().unwrap()).map_err(Failure::Usage)? {
        let j: i64 = j.parse().or_else(|_| usage(format!("bad cusp index {j:?}")))?;
        cusp.insert(j, BigInt::from(c));
    }
    let jmin = cusp.keys().next().copied().unwrap_or(0).min(0);
    let jmax = cusp.keys().last().copied().unwrap_or(0).max(0);
    Ok(Current::from_cusps(Ring::Z, jmin, jmax, &cusp, BigInt::from(s.spine))?)
}

fn current(a: &CurrentCmd, prec: i64) -> Out {
    let tc = tate_curve(a.source.p, &a.source.q, prec)?;
    let c = load_current(&a.source)?;
    let z = || match &a.z {
        Some(z) => padic(z, tc.p(), prec),
        None => usage("--z is required"),
    };
    match a.what {
        CurrentOp::Validate => {
            c.validate()?;
            Ok(json!({ "valid": true, "current": c }))
        }
        CurrentOp::Delta => match tate::delta_eval(&c, &tc, &z()?, a.source.big_j)? {
            DeltaValue::Value { value, err_val } => {
                Ok(json!({ "value": value.to_string(), "err_val": err_val.to_string() }))
            }
            DeltaValue::Pole => Ok(json!({ "pole": true, "ord": -1 })),
        },
        CurrentOp::Alpha => {
            let z = z()?;
            let point = match &a.logradius {
                Some(r) => {
                    let rho: ExtQ = r.parse().or_else(|_| usage(format!("bad log-radius {r:?}")))?;
                    EvalPoint::Ball(BallPoint::new(z, rho)?)
                }
                None => EvalPoint::Value(z),
            };
            let v = tate::alpha_eval(&c, &tc, &point, a.source.big_j)?;
            let mut out = json!({ "err_val": v.err_val.to_string() });
            match v.value {
                PointValue::Value(x) => out["value"] = json!(x.to_string()),
                PointValue::LogNorm(e) => out["lognorm"] = json!(e.to_string()),
            }
            Ok(out)
        }
        CurrentOp::RoundTrip => {
            let f = tate::factored_alpha(&c)?;
            let back = tate::current_from_slopes(&f, &tc)?;
            Ok(json!({ "factored": f, "recovered": back, "ok": back.same_as(&c) }))
        }
    }
}

fn moebius_check(a: &MoebiusCheck, prec: i64) -> Out {
    let tc = tate_curve(a.p, &a.q, prec)?;
    if a.n == 0 {
        return usage("--n must be positive");
    }
    let (value, err) = tate::delta_at_one(a.n, &tc, a.big_j)?;
    let target = tc.q_pow(a.n as i64);
    if err > prec {
        return Err(Error::PrecisionExhausted {
            context: "Möbius identity certificate".into(),
            needed: err.to_string(),
            available: prec.to_string(),
        }
        .into());
    }
    let ok = (&value - &target).val_lower_bound() >= err;
    Ok(json!({ "value": value.to_string(), "target": target.digit_string(), "ok": ok, "err_val": err }))
}

fn poly_eval(a: &PolyEvalCmd, prec: i64) -> Out {
    let tc = tate_curve(a.p, &a.q, prec)?;
    let coeffs = parse::integers(&a.coeffs).map_err(Failure::Usage)?;
    let r = tate::poly_current_eval(&coeffs, &tc, a.big_j)?;
    let ok = (&r.value - &r.target).val_lower_bound() >= r.err_val;
    Ok(json!({
        "value": r.value.to_string(),
        "target": r.target.digit_string(),
        "err_val": r.err_val,
        "ok": ok,
    }))
}

fn theta(a: &Theta, prec: i64) -> Out {
    let tc = tate_curve(a.p, &a.q, prec)?;
    let roots = parse::pairs(&a.roots)
        .map_err(Failure::Usage)?
        .into_iter()
        .map(|(r, k)| Ok((padic(r, tc.p(), prec)?, k)))
        .collect::<Result<Vec<_>, Failure>>()?;
    let f = tate::theta::from_roots(roots);
    let zs = a.z.split(',').map(|z| padic(z, tc.p(), prec)).collect::<Result<Vec<_>, _>>()?;
    let z0 = padic(&a.z0, tc.p(), prec)?;
    if zs.len() > 1 || a.automorphy {
        let r = tate::theta_automorphy(&f, &tc, a.l, &zs, &z0, a.big_m)?;
        let ratios: Vec<String> = r.ratios.iter().map(|x| x.to_string()).collect();
        Ok(json!({ "ratios": ratios, "err_val": r.err_val, "agree": r.agree }))
    } else {
        let v = tate::theta_product(&f, &tc, a.l, &zs[0], &z0, a.big_m)?;
        Ok(json!({ "value": v.value.to_string(), "err_val": v.err_val }))
    }
}

fn ladder(a: &LadderOrd, prec: i64) -> Out {
    let tc = tate_curve(a.source.p, &a.source.q, prec)?;
    let c = load_current(&a.source)?;
    let z = padic(&a.z, tc.p(), prec)?;
    Ok(json!(tate::ladder_ord(&c, &tc, &z, a.nmax)?))
}

fn point(s: &Option<String>, name: &str) -> Result<GraphPoint, Failure> {
    match s {
        Some(s) => serde_json::from_str(s).or_else(|e| usage(format!("--{name}: {e}"))),
        None => usage(format!("--{name} is required with the other point")),
    }
}

fn skeleton(a: &SkeletonTower, seed: u64) -> Out {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tower = match (&a.file, a.random_depth) {
        (Some(path), _) => Tower::from_file(read_json::<TowerFile>(path)?)?,
        (None, Some(d)) => random::random_tower(&mut rng, d)?,
        (None, None) => return usage("give --file or --random-depth"),
    };
    let mut out = json!({ "depth": tower.depth() });
    if a.random_depth.is_some() && a.file.is_none() {
        out["tower"] = json!(tower.to_file());
    }
    match a.check {
        TowerCheck::Compose => {
            let n = a.samples;
            let report = tower.check_compose(&mut |g| random::sample_points(&mut rng, g, n))?;
            out["ok"] = json!(true);
            out["triples"] = json!(report.triples);
            out["samples"] = json!(report.samples);
        }
        TowerCheck::Separation => {
            if a.x.is_some() || a.y.is_some() {
                let (x, y) = (point(&a.x, "x")?, point(&a.y, "y")?);
                let level = tower_separation(&tower, &x, &y)?;
                out["level"] = json!(level);
                out["images_x"] = json!(tower.images(&x)?);
                out["images_y"] = json!(tower.images(&y)?);
            } else {
                let mut levels: BTreeMap<usize, usize> = BTreeMap::new();
                let mut pairs = 0;
                for _ in 0..a.samples {
                    let pts = random::sample_points(&mut rng, tower.finest(), 2);
                    let (x, y) = (tower.finest().normalize(&pts[0])?, tower.finest().normalize(&pts[1])?);
                    if x == y {
                        continue;
                    }
                    *levels.entry(tower_separation(&tower, &x, &y)?).or_default() += 1;
                    pairs += 1;
                }
                out["pairs"] = json!(pairs);
                out["levels"] = json!(levels);
            }
            out["ok"] = json!(true);
        }
    }
    Ok(out)
}
