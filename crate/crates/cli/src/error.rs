use std::io;
use std::path::PathBuf;

use cachenet_core::Error as CoreError;
use thiserror::Error;

use crate::config::ConfigError;

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const INFEASIBLE: i32 = 3;
    pub const NUMERIC: i32 = 4;
    pub const VALIDATION: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Model(#[from] CoreError),
    #[error("budget {budget} $/m²: density range [{start}, {stop}] SCs/m² misses the feasible range [{lo}, {hi}]")]
    EmptySweep {
        budget: f64,
        start: f64,
        stop: f64,
        lo: f64,
        hi: f64,
    },
    #[error("no experiment given on the command line or in the config")]
    NoExperiment,
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::NoExperiment => exit::CONFIG,
            CliError::Model(e) => match e {
                CoreError::Domain { .. } | CoreError::EnergyOrdering { .. } => exit::CONFIG,
                CoreError::Infeasible { .. } => exit::INFEASIBLE,
                CoreError::NoConvergence { .. } | CoreError::ZeroConsumption => exit::NUMERIC,
            },
            CliError::EmptySweep { .. } => exit::INFEASIBLE,
            CliError::Io { .. } | CliError::Csv { .. } => exit::IO,
        }
    }
}
