use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::CountSequence;
use crate::error::{Error, Result};

/// Fitted (μ, d, C) for |a_n − μ Q_n^d| < C Q_n^{d − 1/2}.
#[derive(Clone, Debug, PartialEq)]
pub struct LangWeilFit {
    pub d: u32,
    pub mu: BigRational,
    /// whether (d, μ) were inferred rather than declared
    pub inferred: bool,
    /// max over n of |r_n| / Q_n^{d − 1/2}
    pub constant: f64,
    /// slope of log|r_n| against log Q_n; −∞ when fewer than two residuals
    /// are nonzero
    pub residual_exponent: f64,
    /// r_n = a_n − μ Q_n^d
    pub residuals: Vec<BigRational>,
    /// C over the first and second half of the range
    pub window_constants: (f64, f64),
    pub warnings: Vec<String>,
}

impl LangWeilFit {
    /// Whether C does not grow from the first half of the range to the second.
    pub fn stable(&self) -> bool {
        self.window_constants.1 <= self.window_constants.0 * (1.0 + 1e-9)
    }
}

fn log_big(v: &BigUint) -> f64 {
    // log of a big integer without overflowing f64
    let bits = v.bits();
    if bits < 1000 {
        return v.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 900;
    (v >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

fn log_rat(r: &BigRational) -> f64 {
    let num = r.numer().abs().to_biguint().unwrap_or_default();
    let den = r.denom().abs().to_biguint().unwrap_or_default();
    log_big(&num) - log_big(&den)
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Best rational approximation of x with denominator at most `max_den`.
fn approximate(x: f64, max_den: i64) -> BigRational {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor() as i64;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a as f64;
        if frac.abs() < 1e-12 {
            break;
        }
        y = 1.0 / frac;
    }
    BigRational::new(BigInt::from(h1), BigInt::from(k1.max(1)))
}

fn scaled_constant(r: &BigRational, q: &BigUint, d: u32) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    (log_rat(r) - (d as f64 - 0.5) * log_big(q)).exp()
}

/// `lang_weil_fit`: declared (d, μ) or inferred from the tail of the data.
pub fn lang_weil_fit(
    cs: &CountSequence,
    d: Option<u32>,
    mu: Option<BigRational>,
) -> Result<LangWeilFit> {
    if cs.len() < 4 {
        return Err(Error::invalid("diffvar", "a Lang-Weil fit needs at least 4 counts"));
    }
    if cs.counts.iter().all(|&c| c == 0) {
        return Err(Error::invalid("diffvar", "all counts are zero"));
    }
    let mut warnings = Vec::new();
    let inferred = d.is_none() || mu.is_none();
    let d = match d {
        Some(d) => d,
        None => {
            let nz: Vec<usize> = (0..cs.len()).filter(|&i| cs.counts[i] > 0).collect();
            let tail = &nz[nz.len() / 2..];
            let tail = if tail.len() < 2 { &nz[..] } else { tail };
            if tail.len() < 2 {
                warnings.push("only one nonzero count; dimension set to 0".into());
                0
            } else {
                let xs: Vec<f64> = tail.iter().map(|&i| log_big(&cs.big_q[i])).collect();
                let ys: Vec<f64> = tail.iter().map(|&i| (cs.counts[i] as f64).ln()).collect();
                let s = slope(&xs, &ys);
                if (s - s.round()).abs() > 0.25 {
                    warnings.push(format!("fitted dimension slope {s:.3} is far from an integer"));
                }
                s.round().max(0.0) as u32
            }
        }
    };
    let mu = match mu {
        Some(m) => m,
        None => {
            let last = cs.len() - 1;
            let lead = BigRational::new(
                BigInt::from(cs.counts[last]),
                BigInt::from(cs.big_q[last].pow(d)),
            );
            let x = log_rat(&lead).exp();
            let m = approximate(x, 100);
            if m.is_zero() {
                warnings.push("leading coefficient rounds to zero".into());
            }
            m
        }
    };
    let residuals: Vec<BigRational> = (0..cs.len())
        .map(|i| {
            let main = &mu * BigRational::from_integer(BigInt::from(cs.big_q[i].pow(d)));
            BigRational::from_integer(BigInt::from(cs.counts[i])) - main
        })
        .collect();
    let consts: Vec<f64> = (0..cs.len())
        .map(|i| scaled_constant(&residuals[i], &cs.big_q[i], d))
        .collect();
    let max = |s: &[f64]| s.iter().cloned().fold(0.0, f64::max);
    let half = cs.len() / 2;
    let constant = max(&consts);
    let window_constants = (max(&consts[..half]), max(&consts[half..]));

    let nz: Vec<usize> = (0..cs.len()).filter(|&i| !residuals[i].is_zero()).collect();
    let residual_exponent = if nz.len() < 2 {
        f64::NEG_INFINITY
    } else {
        let xs: Vec<f64> = nz.iter().map(|&i| log_big(&cs.big_q[i])).collect();
        let ys: Vec<f64> = nz.iter().map(|&i| log_rat(&residuals[i])).collect();
        slope(&xs, &ys)
    };
    if residual_exponent > d as f64 - 0.5 + 0.05 {
        warnings.push(format!(
            "residual exponent {residual_exponent:.3} exceeds d - 1/2 = {}",
            d as f64 - 0.5
        ));
    }
    let fit = LangWeilFit {
        d,
        mu,
        inferred,
        constant,
        residual_exponent,
        residuals,
        window_constants,
        warnings,
    };
    let mut fit = fit;
    if !fit.stable() {
        fit.warnings.push("fitted constant grows across the range".into());
    }
    Ok(fit)
}
