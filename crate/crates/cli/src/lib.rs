//! Experiment driver for the spatial-parity simulator: configuration,
//! experiment runners and the CSV / summary / config-echo writers behind the
//! `parity-sim` binary.

pub mod args;
pub mod config;
pub mod csv;
pub mod error;
pub mod experiments;

pub use config::{Experiment, RunConfig, DEFAULT_OUT_DIR, OUT_DIR_ENV};
pub use csv::{fit_theta_sweep_csv, format_f64, parse_theta_sweep};
pub use error::CliError;
pub use experiments::{compute, run, Artifacts, Outcome, Summary};
