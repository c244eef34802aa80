//! Zeta and L-series, constructible functions and their realizations,
//! pairings, Dirichlet densities and the checks built on them.

mod checks;
mod constructible;
mod pade;
mod report;

pub use checks::{adjointness_report, chebotarev_report, trace_check, zeta_shape_check};
pub use constructible::{
    constructible_algebra, pairing, realize, realized_pullback, AlgebraOp, BasicConstructible,
    ConstructibleFunction, PolyMap, Realization, Stratum,
};
pub use pade::{near_rationality_probe, PadeFit};
pub use report::{decimal, Fitted, NumFormat, Report};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::diffvar::{CountOptions, CountSequence};
use crate::error::{Error, Result};
use crate::gauss::{self, Gauss};

/// Coefficients c_1..c_N of a logarithmic series ∑ c_n tⁿ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesData {
    pub coeffs: Vec<Gauss>,
}

impl SeriesData {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// ∑_{n ≤ N} c_n tⁿ, exactly.
    pub fn eval(&self, t: &BigRational) -> Gauss {
        let mut acc = gauss::zero();
        let mut power = BigRational::one();
        for c in &self.coeffs {
            power *= t;
            acc += c.scale(power.clone());
        }
        acc
    }
}

fn require_contiguous(ns: &[u64]) -> Result<()> {
    if ns.iter().enumerate().any(|(i, &n)| n != i as u64 + 1) {
        return Err(Error::invalid("density", "series need levels 1..N without gaps"));
    }
    Ok(())
}

/// `zeta_coeffs`: c_n = a_n / n.
pub fn zeta_coeffs(cs: &CountSequence) -> Result<SeriesData> {
    require_contiguous(&cs.ns)?;
    Ok(SeriesData {
        coeffs: cs
            .ns
            .iter()
            .zip(&cs.counts)
            .map(|(&n, &a)| gauss::from_real(BigRational::new(BigInt::from(a), BigInt::from(n))))
            .collect(),
    })
}

/// `l_coeffs`: c_n = (∑_x f(φ_{n,x})) / n for n = 1..N.
pub fn l_coeffs(f: &ConstructibleFunction, big_n: u64, opts: &CountOptions) -> Result<SeriesData> {
    let coeffs = (1..=big_n)
        .map(|n| {
            let r = realize(f, n, opts)?;
            Ok(r.sum().scale(BigRational::new(BigInt::one(), BigInt::from(n))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SeriesData { coeffs })
}

/// Ratios log L / log Z along t_j = q^{−d}(1 − 2^{−j}).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityEstimate {
    pub schedule: Vec<u32>,
    pub points: Vec<BigRational>,
    pub ratios: Vec<Gauss>,
}

impl DensityEstimate {
    pub fn last(&self) -> &Gauss {
        self.ratios.last().expect("nonempty schedule")
    }
}

/// Default evaluation schedule j = 4..20.
pub fn default_schedule() -> Vec<u32> {
    (4..=20).collect()
}

/// `dirichlet_density`: exact evaluation of the truncated log-series ratio.
pub fn dirichlet_density(
    l: &SeriesData,
    z: &SeriesData,
    d: u32,
    q: u64,
    schedule: &[u32],
) -> Result<DensityEstimate> {
    if l.len() != z.len() || l.is_empty() {
        return Err(Error::invalid("density", "L and Z series must share a nonempty range"));
    }
    if schedule.is_empty() {
        return Err(Error::invalid("density", "empty evaluation schedule"));
    }
    let mut points = Vec::new();
    let mut ratios = Vec::new();
    for &j in schedule {
        let two_j = BigInt::one() << j as usize;
        let t = BigRational::new(&two_j - 1, two_j * BigInt::from(q).pow(d));
        let denom = z.eval(&t);
        if denom.is_zero() {
            return Err(Error::invalid("density", "log Z vanishes at an evaluation point"));
        }
        ratios.push(l.eval(&t) / denom);
        points.push(t);
    }
    Ok(DensityEstimate {
        schedule: schedule.to_vec(),
        points,
        ratios,
    })
}
