use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use super::report::{float, magnitude};
use super::{dirichlet_density, l_coeffs, zeta_coeffs, BasicConstructible, ConstructibleFunction, Fitted, NumFormat, Report};
use crate::diffvar::{count_sequence, lang_weil_fit, CountOptions, CountSequence};
use crate::error::{Error, Result};
use crate::gauss::{self, Gauss};
use crate::quandle::CentralFunction;

fn log_q(q: &BigUint) -> f64 {
    q.to_f64().unwrap_or(f64::INFINITY).ln()
}

/// C = max |e_n| / Q_n^{d − 1/2} and the slope of log|e_n| against log Q_n.
fn fit_decay(qs: &[BigUint], errs: &[f64], d: f64) -> Fitted {
    let c = qs
        .iter()
        .zip(errs)
        .map(|(q, e)| if *e == 0.0 { 0.0 } else { (e.ln() - (d - 0.5) * log_q(q)).exp() })
        .fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = qs
        .iter()
        .zip(errs)
        .filter(|(_, e)| **e > 0.0)
        .map(|(q, e)| (log_q(q), e.ln()))
        .collect();
    let exponent = if pts.len() < 2 {
        f64::NEG_INFINITY
    } else {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    };
    Fitted { c, exponent }
}

fn range(big_n: u64) -> Result<Vec<u64>> {
    if big_n == 0 {
        return Err(Error::invalid("density", "n range must be nonempty"));
    }
    Ok((1..=big_n).collect())
}

fn base_params(cs: &CountSequence) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("p".into(), json!(cs.p));
    m.insert("q".into(), json!(cs.q));
    m.insert("q0".into(), json!(cs.q0));
    m.insert("n_max".into(), json!(cs.ns.last().copied().unwrap_or(0)));
    m
}

/// `chebotarev_report`: Dirichlet density of α against its Haar mean.
pub fn chebotarev_report(
    basic: &BasicConstructible,
    big_n: u64,
    d: u32,
    schedule: &[u32],
    tolerance: f64,
    fmt: NumFormat,
    opts: &CountOptions,
) -> Result<Report> {
    let ns = range(big_n)?;
    let base = basic.cover.base();
    let cs = count_sequence(base, &ns, opts)?;
    let f = ConstructibleFunction::basic(basic.clone());
    let z = zeta_coeffs(&cs)?;
    let l = l_coeffs(&f, big_n, opts)?;
    let est = dirichlet_density(&l, &z, d, base.base().q, schedule)?;
    let haar = basic.alpha.mean();
    let gap = magnitude(&(est.last() - &haar));
    let per_n = ns
        .iter()
        .map(|&n| {
            let i = n as usize - 1;
            json!({
                "n": n,
                "count": cs.counts[i].to_string(),
                "zeta_coeff": fmt.gauss(&z.coeffs[i]),
                "l_coeff": fmt.gauss(&l.coeffs[i]),
            })
        })
        .collect();
    let sequence: Vec<Value> = est
        .schedule
        .iter()
        .zip(&est.points)
        .zip(&est.ratios)
        .map(|((j, t), r)| json!({ "j": j, "t": fmt.rational(t), "ratio": fmt.gauss(r) }))
        .collect();
    let mut params = base_params(&cs);
    params.insert("d".into(), json!(d));
    params.insert("tolerance".into(), float(tolerance));
    let mut extra = Map::new();
    extra.insert(
        "density".into(),
        json!({
            "sequence": sequence,
            "estimate": fmt.gauss(est.last()),
            "haar": fmt.gauss(&haar),
            "gap": float(gap),
        }),
    );
    Ok(Report {
        check: "chebotarev".into(),
        params: Value::Object(params),
        per_n,
        pass: gap < tolerance,
        fitted: None,
        extra,
    })
}

/// Frobenius classes at level n and their common image in T.
fn classes(basic: &BasicConstructible, n: u64, opts: &CountOptions) -> Result<(Vec<usize>, Option<usize>)> {
    let cover = &basic.cover;
    let lv = cover.level(n, opts)?;
    let classes: Vec<usize> = cover
        .substitutions(&lv, opts.exec)?
        .into_iter()
        .map(|r| r.class_rep)
        .collect();
    let pi = cover.base_map()?;
    let ts: BTreeSet<usize> = classes.iter().map(|&c| pi.apply(c)).collect();
    if ts.len() > 1 {
        return Err(Error::invalid(
            "density",
            format!("points at level {n} disagree on the Frobenius of the constant field"),
        ));
    }
    Ok((classes, ts.into_iter().next()))
}

/// `trace_check`: ∑_x α(φ_{n,x}) against p_*α(φ_{n,s})·a_n.
pub fn trace_check(basic: &BasicConstructible, big_n: u64, d: u32, fmt: NumFormat, opts: &CountOptions) -> Result<Report> {
    let ns = range(big_n)?;
    let pushed = basic.cover.pushforward_to_base(&basic.alpha)?;
    let mut per_n = Vec::new();
    let mut qs = Vec::new();
    let mut errs = Vec::new();
    for &n in &ns {
        let (cls, t) = classes(basic, n, opts)?;
        let lhs = cls.iter().fold(gauss::zero(), |acc, &c| acc + basic.alpha.value(c));
        let rhs = match t {
            Some(t) => pushed.value(t).scale(BigRational::from_integer(BigInt::from(cls.len()))),
            None => gauss::zero(),
        };
        let err = &lhs - &rhs;
        let q = basic.cover.base().base().twist(n).big_q();
        per_n.push(json!({
            "n": n,
            "Q": q.to_string(),
            "count": cls.len(),
            "lhs": fmt.gauss(&lhs),
            "rhs": fmt.gauss(&rhs),
            "error": fmt.gauss(&err),
        }));
        errs.push(magnitude(&err));
        qs.push(q);
    }
    let fitted = fit_decay(&qs, &errs, d as f64);
    let pass = errs.iter().all(|&e| e == 0.0) || fitted.exponent <= d as f64 - 0.45;
    Ok(Report {
        check: "trace".into(),
        params: json!({ "n_max": big_n, "d": d, "constFieldDegree": basic.cover.const_field_degree() }),
        per_n,
        pass,
        fitted: Some(fitted),
        extra: Map::new(),
    })
}

fn lang_weil_per_n(cs: &CountSequence, residuals: &[BigRational], fmt: NumFormat) -> Vec<Value> {
    (0..cs.len())
        .map(|i| {
            json!({
                "n": cs.ns[i],
                "Q": cs.big_q[i].to_string(),
                "count": cs.counts[i].to_string(),
                "residual": fmt.rational(&residuals[i]),
            })
        })
        .collect()
}

/// `zeta_shape_check` with declared (d, μ); a Lang–Weil fit when either is
/// missing. Passes when the residual exponent is at most d − 1/2 + tolerance
/// and, for inferred fits, C does not grow across the range.
pub fn zeta_shape_check(
    cs: &CountSequence,
    d: Option<u32>,
    mu: Option<BigRational>,
    tolerance: f64,
    fmt: NumFormat,
) -> Result<Report> {
    let fit = lang_weil_fit(cs, d, mu)?;
    let bound = fit.d as f64 - 0.5 + tolerance;
    let pass = fit.residual_exponent <= bound && fit.constant.is_finite() && (!fit.inferred || fit.stable());
    let mut params = base_params(cs);
    params.insert("d".into(), json!(fit.d));
    params.insert("mu".into(), json!(fit.mu.to_string()));
    params.insert("inferred".into(), json!(fit.inferred));
    params.insert("tolerance".into(), float(tolerance));
    let mut extra = Map::new();
    extra.insert(
        "windows".into(),
        json!({ "C_first": float(fit.window_constants.0), "C_second": float(fit.window_constants.1), "stable": fit.stable() }),
    );
    extra.insert("warnings".into(), json!(fit.warnings));
    Ok(Report {
        check: if fit.inferred { "langweil".into() } else { "zeta-shape".into() },
        params: Value::Object(params),
        per_n: lang_weil_per_n(cs, &fit.residuals, fmt),
        pass,
        fitted: Some(Fitted {
            c: fit.constant,
            exponent: fit.residual_exponent,
        }),
        extra,
    })
}

/// `adjointness_report` for the structure map p: X → Spec k of a cover:
/// (α, p*β) on X_n against (p_*α, β) on the base point.
pub fn adjointness_report(
    basic: &BasicConstructible,
    beta: &CentralFunction,
    big_n: u64,
    tolerance: f64,
    fmt: NumFormat,
    opts: &CountOptions,
) -> Result<Report> {
    let ns = range(big_n)?;
    let pi = basic.cover.base_map()?;
    if beta.structure() != pi.target() {
        return Err(crate::Error::StructureMismatch);
    }
    let pushed = basic.cover.pushforward_to_base(&basic.alpha)?;
    let mut per_n = Vec::new();
    let mut qs = Vec::new();
    let mut errs = Vec::new();
    for &n in &ns {
        let (cls, t) = classes(basic, n, opts)?;
        let (lhs, rhs) = match t {
            None => (gauss::zero(), gauss::zero()),
            Some(t) => {
                let sum = cls
                    .iter()
                    .fold(gauss::zero(), |acc, &c| acc + basic.alpha.value(c) * beta.value(pi.apply(c)).conj());
                let lhs: Gauss = sum.scale(BigRational::new(1.into(), BigInt::from(cls.len())));
                (lhs, pushed.value(t) * beta.value(t).conj())
            }
        };
        let err = &lhs - &rhs;
        per_n.push(json!({ "n": n, "lhs": fmt.gauss(&lhs), "rhs": fmt.gauss(&rhs), "discrepancy": fmt.gauss(&err) }));
        errs.push(magnitude(&err));
        qs.push(basic.cover.base().base().twist(n).big_q());
    }
    // discrepancies are compared against Q^{-1/2}, so fit with d = 0
    let fitted = fit_decay(&qs, &errs, 0.0);
    let pass = errs.iter().all(|&e| e == 0.0) || fitted.exponent <= -0.5 + tolerance;
    Ok(Report {
        check: "adjointness".into(),
        params: json!({ "n_max": big_n, "tolerance": float(tolerance) }),
        per_n,
        pass,
        fitted: Some(fitted),
        extra: Map::new(),
    })
}
