//! Experiment configuration and batch runner behind the `domsets` binary.

pub mod config;
pub mod experiment;

pub use config::{ConfigError, EpsilonRule, ExperimentConfig, Mode, Model};
pub use experiment::{all_rows_over_budget, run_experiment, to_csv_string, write_csv, ExperimentError, ExperimentRow};
