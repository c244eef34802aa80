use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::gauss::{self, Gauss};

/// Decimal rendering of exact quantities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NumFormat {
    pub digits: usize,
}

impl NumFormat {
    /// Digits carried by a binary precision of `bits`.
    pub fn from_bits(bits: u32) -> Self {
        NumFormat {
            digits: (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize,
        }
    }

    pub fn rational(&self, r: &BigRational) -> Value {
        json!({ "exact": r.to_string(), "decimal": decimal(r, self.digits) })
    }

    pub fn gauss(&self, z: &Gauss) -> Value {
        if gauss::is_real(z) {
            return self.rational(&z.re);
        }
        json!({
            "exact": gauss::display(z),
            "re": decimal(&z.re, self.digits),
            "im": decimal(&z.im, self.digits),
        })
    }
}

impl Default for NumFormat {
    fn default() -> Self {
        NumFormat::from_bits(200)
    }
}

/// r rounded half away from zero to `digits` places, trailing zeros dropped.
pub fn decimal(r: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = r.abs() * BigRational::from_integer(scale);
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let rounded = if rem * 2 >= *scaled.denom() { q + 1 } else { q };
    let mut s = rounded.to_string();
    if s.len() <= digits {
        s = "0".repeat(digits + 1 - s.len()) + &s;
    }
    let (int, frac) = s.split_at(s.len() - digits);
    let frac = frac.trim_end_matches('0');
    let sign = if r.numer().sign() == Sign::Minus && !(rounded_is_zero(int, frac)) { "-" } else { "" };
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

fn rounded_is_zero(int: &str, frac: &str) -> bool {
    int.chars().all(|c| c == '0') && frac.is_empty()
}

/// Fitted constant C and decay exponent of a residual sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fitted {
    pub c: f64,
    pub exponent: f64,
}

/// Non-finite floats have no JSON number form.
pub(crate) fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

/// Outcome of one check, serialized as
/// {check, params, per_n, verdict, fitted: {C, exponent}} plus extras.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub check: String,
    pub params: Value,
    pub per_n: Vec<Value>,
    pub pass: bool,
    pub fitted: Option<Fitted>,
    pub extra: Map<String, Value>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("check".into(), json!(self.check));
        m.insert("params".into(), self.params.clone());
        m.insert("per_n".into(), Value::Array(self.per_n.clone()));
        m.insert("verdict".into(), json!(if self.pass { "pass" } else { "fail" }));
        m.insert(
            "fitted".into(),
            match self.fitted {
                Some(f) => json!({ "C": float(f.c), "exponent": float(f.exponent) }),
                None => Value::Null,
            },
        );
        for (k, v) in &self.extra {
            m.insert(k.clone(), v.clone());
        }
        Value::Object(m)
    }
}

/// |z| of an exact value as a float, 0 exactly when z = 0.
pub(crate) fn magnitude(z: &Gauss) -> f64 {
    if z.re.is_zero() && z.im.is_zero() {
        0.0
    } else {
        gauss::abs_f64(z)
    }
}
