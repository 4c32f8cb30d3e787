//! Experiment runner for cache-aided two-tier cellular networks.
//!
//! Reads a `key = value` configuration, evaluates closed forms, Monte Carlo
//! estimates and deployment optima from [`cachenet_core`], and writes CSV
//! tables with gnuplot scripts. Output is a pure function of the
//! configuration and seed.

pub mod config;
pub mod driver;
pub mod error;
pub mod experiments;
pub mod format;
pub mod output;

pub use config::{parse_config, ConfigError, Experiment, ExperimentConfig, Settings, KEYS};
pub use error::{exit, CliError};
pub use experiments::{run, Report, ValidationSummary};
