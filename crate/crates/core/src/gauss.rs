//! Exact Gaussian rationals `a + b i` with `a, b ∈ ℚ`.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Gauss = Complex<BigRational>;

pub fn from_int(v: i64) -> Gauss {
    Complex::new(BigRational::from_integer(v.into()), BigRational::zero())
}

pub fn from_ratio(num: i64, den: i64) -> Gauss {
    Complex::new(
        BigRational::new(num.into(), den.into()),
        BigRational::zero(),
    )
}

pub fn from_real(r: BigRational) -> Gauss {
    Complex::new(r, BigRational::zero())
}

pub fn zero() -> Gauss {
    Complex::zero()
}

pub fn one() -> Gauss {
    Complex::one()
}

pub fn is_real(z: &Gauss) -> bool {
    z.im.is_zero()
}

/// |z| as a float, for reporting only.
pub fn abs_f64(z: &Gauss) -> f64 {
    let re = z.re.to_f64().unwrap_or(f64::NAN);
    let im = z.im.to_f64().unwrap_or(f64::NAN);
    re.hypot(im)
}

/// The serialized form `[num, den, inum, iden]` of decimal strings.
pub fn to_strings(z: &Gauss) -> [String; 4] {
    [
        z.re.numer().to_string(),
        z.re.denom().to_string(),
        z.im.numer().to_string(),
        z.im.denom().to_string(),
    ]
}

pub fn from_strings(parts: &[String]) -> Result<Gauss> {
    let [num, den, inum, iden] = parts else {
        return Err(Error::Quandle(format!(
            "Gaussian rational needs 4 components, got {}",
            parts.len()
        )));
    };
    let int = |s: &str| -> Result<BigInt> {
        s.trim()
            .parse()
            .map_err(|_| Error::Quandle(format!("not an integer: {s:?}")))
    };
    let frac = |n: &str, d: &str| -> Result<BigRational> {
        let d = int(d)?;
        if d.is_zero() {
            return Err(Error::Quandle("zero denominator".into()));
        }
        Ok(BigRational::new(int(n)?, d))
    };
    Ok(Complex::new(frac(num, den)?, frac(inum, iden)?))
}

/// Human-readable rendering, e.g. `1/3`, `-2+1/2i`.
pub fn display(z: &Gauss) -> String {
    if z.im.is_zero() {
        return z.re.to_string();
    }
    if z.re.is_zero() {
        return format!("{}i", z.im);
    }
    let sign = if z.im.is_negative() { "-" } else { "+" };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}
