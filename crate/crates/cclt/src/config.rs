use std::path::PathBuf;

use cclt_core::dist::{DEFAULT_ENUM_CAP, MIN_MC_SAMPLES};
use cclt_core::permanent::DEFAULT_PERM_CAP;
use cclt_core::quad::DEFAULT_TOL;

use crate::error::{CliError, CliResult};

/// Settings shared by every command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub enum_cap: usize,
    pub perm_cap: usize,
    pub quad_tol: f64,
    pub mc_samples: usize,
    pub seed: u64,
    pub threads: usize,
    /// `None` writes to stdout.
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            enum_cap: DEFAULT_ENUM_CAP,
            perm_cap: DEFAULT_PERM_CAP,
            quad_tol: DEFAULT_TOL,
            mc_samples: 1_000_000,
            seed: 0,
            threads: 1,
            output_path: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.enum_cap < 2 || self.perm_cap < 2 {
            return Err(CliError::Config("caps must be at least 2".into()));
        }
        if !(self.quad_tol > 0.0) {
            return Err(CliError::Config(format!("quad-tol must be positive, got {}", self.quad_tol)));
        }
        if self.mc_samples < MIN_MC_SAMPLES {
            return Err(CliError::Config(format!("mc-samples must be at least {MIN_MC_SAMPLES}")));
        }
        if self.threads == 0 {
            return Err(CliError::Config("threads must be at least 1".into()));
        }
        Ok(())
    }
}
