//! JSON experiment configuration, schema version 1.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use diffcheb::gauss::{self, Gauss};
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::Value;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub base: BaseConfig,
    #[serde(default)]
    pub variety: VarietyConfig,
    pub cover: Option<CoverConfig>,
    pub central_function: Option<CentralFunctionConfig>,
    pub experiment: ExperimentSpec,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct BaseConfig {
    pub p: u64,
    pub q: u64,
    #[serde(default = "one")]
    pub q0: u64,
    /// identifier for the generator of F_q in expressions
    pub generator_name: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct VarietyConfig {
    #[serde(default)]
    pub vars: Vec<String>,
    #[serde(default)]
    pub equations: Vec<String>,
    #[serde(default)]
    pub units: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CoverConfig {
    pub fiber_vars: Vec<String>,
    pub fiber_equations: Vec<String>,
    #[serde(default)]
    pub fiber_units: Vec<String>,
    pub group_generators: Vec<BTreeMap<String, Value>>,
    #[serde(default)]
    pub sigma_tilde: BTreeMap<String, Value>,
    #[serde(default = "one")]
    pub const_field_degree: u64,
    #[serde(default = "one")]
    pub validation_level: u64,
    pub fiber_extension: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CentralKind {
    Indicator,
    Table,
}

/// `indicator`: data lists members of Σ by index. `table`: one value per
/// element of Σ, each a number, a string "a/b" or [num, den, inum, iden].
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CentralFunctionConfig {
    pub kind: CentralKind,
    pub data: Vec<Value>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Count,
    Subst,
    Density,
    Trace,
    Langweil,
    ZetaShape,
    Pade,
    IdealMember,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Count => "count",
            ExperimentKind::Subst => "subst",
            ExperimentKind::Density => "density",
            ExperimentKind::Trace => "trace",
            ExperimentKind::Langweil => "langweil",
            ExperimentKind::ZetaShape => "zeta-shape",
            ExperimentKind::Pade => "pade",
            ExperimentKind::IdealMember => "ideal-member",
        }
    }

    pub fn needs_cover(self) -> bool {
        matches!(self, ExperimentKind::Subst | ExperimentKind::Density | ExperimentKind::Trace)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    /// inclusive [first, last] range of levels n
    pub n_range: Option<[u64; 2]>,
    pub d: Option<u32>,
    /// rational string such as "1/2"
    pub mu: Option<String>,
    pub schedule: Option<Vec<u32>>,
    pub tolerance: Option<f64>,
    /// largest numerator and denominator degree tried by the rational probe
    pub max_degree: Option<usize>,
    pub bounds: Option<BoundsConfig>,
    pub ideal: Option<IdealConfig>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct BoundsConfig {
    pub k: u32,
    pub l: u32,
    pub m: u32,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct IdealConfig {
    /// candidate member
    pub f: String,
    /// generators; the variety's equations when absent
    pub gens: Option<Vec<String>>,
    /// expected outcome, "yes" or "no"
    pub expect: Option<String>,
    /// levels n for the point cross-check
    pub point_levels: Option<Vec<u64>>,
    /// coordinate field extensions for the point cross-check
    pub point_extensions: Option<Vec<u64>>,
    /// size of the randomized corpus run alongside, seeded by the config seed
    pub corpus_size: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct OutputConfig {
    pub csv_path: Option<String>,
    pub json_path: Option<String>,
}

fn one() -> u64 {
    1
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| CliError::config(format!("malformed config: {e}")))?;
        cfg.check()?;
        Ok(cfg)
    }

    /// Checks that do not need the mathematical modules.
    fn check(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::config(format!(
                "unsupported schemaVersion {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let b = &self.base;
        if b.q0 == 0 || b.q % b.q0 != 0 {
            return Err(CliError::config("q0 must divide q"));
        }
        let kind = self.experiment.kind;
        if kind != ExperimentKind::IdealMember {
            let [lo, hi] = self.n_range()?;
            if lo == 0 || lo > hi {
                return Err(CliError::config("nRange must be a nonempty range of positive levels"));
            }
        }
        if kind.needs_cover() {
            if self.cover.is_none() {
                return Err(CliError::config(format!("experiment {} needs a cover", kind.name())));
            }
            if kind != ExperimentKind::Subst && self.central_function.is_none() {
                return Err(CliError::config(format!("experiment {} needs a centralFunction", kind.name())));
            }
            if kind != ExperimentKind::Subst && self.n_range()?[0] != 1 {
                return Err(CliError::config(format!("experiment {} needs nRange starting at 1", kind.name())));
            }
        }
        if kind == ExperimentKind::ZetaShape && (self.experiment.d.is_none() || self.experiment.mu.is_none()) {
            return Err(CliError::config("zeta-shape needs d and mu"));
        }
        if kind == ExperimentKind::IdealMember && self.experiment.ideal.is_none() {
            return Err(CliError::config("ideal-member needs an ideal section"));
        }
        if let Some(e) = &self.experiment.ideal {
            if let Some(x) = &e.expect {
                if x != "yes" && x != "no" {
                    return Err(CliError::config("ideal.expect must be \"yes\" or \"no\""));
                }
            }
        }
        Ok(())
    }

    pub fn n_range(&self) -> Result<[u64; 2], CliError> {
        self.experiment
            .n_range
            .ok_or_else(|| CliError::config(format!("experiment {} needs nRange", self.experiment.kind.name())))
    }

    pub fn levels(&self) -> Result<Vec<u64>, CliError> {
        let [lo, hi] = self.n_range()?;
        Ok((lo..=hi).collect())
    }

    pub fn mu(&self) -> Result<Option<BigRational>, CliError> {
        self.experiment
            .mu
            .as_deref()
            .map(|s| parse_rational(s).ok_or_else(|| CliError::config(format!("mu is not a rational: {s:?}"))))
            .transpose()
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = n.trim().parse().ok()?;
            let d: num_bigint::BigInt = d.trim().parse().ok()?;
            (d != num_bigint::BigInt::from(0)).then(|| BigRational::new(n, d))
        }
        None => BigRational::from_str(s).ok(),
    }
}

/// A table entry as an exact Gaussian rational.
pub fn parse_gauss(v: &Value) -> Result<Gauss, CliError> {
    let bad = || CliError::config(format!("not a Gaussian rational: {v}"));
    match v {
        Value::Number(n) => {
            let text = n.to_string();
            if let Some(i) = n.as_i64() {
                Ok(gauss::from_int(i))
            } else {
                parse_decimal(&text).map(gauss::from_real).ok_or_else(bad)
            }
        }
        Value::String(s) => parse_rational(s)
            .or_else(|| parse_decimal(s))
            .map(gauss::from_real)
            .ok_or_else(bad),
        Value::Array(parts) => {
            let parts: Vec<String> = parts
                .iter()
                .map(|p| match p {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    _ => Err(bad()),
                })
                .collect::<Result<_, _>>()?;
            gauss::from_strings(&parts).map_err(|_| bad())
        }
        _ => Err(bad()),
    }
}

/// Exact value of a plain decimal such as "0.25".
fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.')?;
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: num_bigint::BigInt = format!("{int}{frac}").parse().ok()?;
    let den = num_bigint::BigInt::from(10).pow(frac.len() as u32);
    let r = BigRational::new(digits, den);
    Some(if neg { -r } else { r })
}

/// Stringify JSON scalars so numeric map values like `"constTwist": 1` work.
pub fn string_map(m: &BTreeMap<String, Value>) -> Result<BTreeMap<String, String>, CliError> {
    m.iter()
        .map(|(k, v)| match v {
            Value::String(s) => Ok((k.clone(), s.clone())),
            Value::Number(n) => Ok((k.clone(), n.to_string())),
            _ => Err(CliError::config(format!("map value for {k} must be a string or number"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_and_decimals() {
        assert_eq!(parse_rational("1/2"), Some(BigRational::new(1.into(), 2.into())));
        assert_eq!(parse_rational("3"), Some(BigRational::from_integer(3.into())));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_decimal("-0.25"), Some(BigRational::new((-1).into(), 4.into())));
        assert_eq!(parse_gauss(&serde_json::json!(["1", "3", "0", "1"])).unwrap(), gauss::from_ratio(1, 3));
        assert_eq!(parse_gauss(&serde_json::json!("2/6")).unwrap(), gauss::from_ratio(1, 3));
        assert_eq!(parse_gauss(&serde_json::json!(0.5)).unwrap(), gauss::from_ratio(1, 2));
    }
}
