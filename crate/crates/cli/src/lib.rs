//! Config ingestion, experiment orchestration and deterministic output for
//! the `diffcheb` command.

pub mod config;
pub mod error;
pub mod run;

pub use config::ExperimentConfig;
pub use error::{exit, CliError};
pub use run::{build_central, build_cover, build_system, run, validate, write_artifacts, Outcome, RunOptions, DEFAULT_PRECISION_BITS};

/// Precision for decimal output, from FROB_PRECISION_BITS when set.
pub fn precision_bits_from_env() -> Result<u32, CliError> {
    match std::env::var("FROB_PRECISION_BITS") {
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|&b| b > 0)
            .ok_or_else(|| CliError::config(format!("FROB_PRECISION_BITS must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_PRECISION_BITS),
    }
}
