use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Environment variable that overrides the default output directory.
pub const OUT_DIR_ENV: &str = "PARITY_SIM_OUT_DIR";

pub const DEFAULT_OUT_DIR: &str = "out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Traditional Mach–Zehnder interferogram.
    Mzi,
    /// Parity-sensitive Mach–Zehnder interferogram.
    Psmzi,
    /// Zero-delay coincidence versus pump plate phase.
    ThetaSweep,
    /// Concurrence of the pump-superposition families.
    Concurrence,
    /// Random element words, continuous modes versus 2×2 matrices.
    Isomorphism,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Mzi => "mzi",
            Experiment::Psmzi => "psmzi",
            Experiment::ThetaSweep => "theta-sweep",
            Experiment::Concurrence => "concurrence",
            Experiment::Isomorphism => "isomorphism",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fully resolved settings of one run. Echoed next to the outputs as TOML
/// and accepted back by `parity-sim replay`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub lambda_p_nm: f64,
    pub filter_center_nm: f64,
    pub filter_fwhm_nm: f64,
    /// Recorded for provenance; the model does not use it.
    pub crystal_thickness_mm: f64,
    pub plate_theta: f64,
    pub tau_min_s: f64,
    pub tau_max_s: f64,
    pub tau_step_s: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub theta_steps: usize,
    pub grid_n: usize,
    pub grid_l: f64,
    pub omega_nodes: usize,
    /// Plate-phase samples for `concurrence`.
    pub samples: usize,
    /// Random words for `isomorphism`.
    pub words: usize,
    pub max_word_len: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
}

impl RunConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            lambda_p_nm: 405.0,
            filter_center_nm: 810.0,
            filter_fwhm_nm: 10.0,
            crystal_thickness_mm: 1.5,
            plate_theta: 0.0,
            tau_min_s: -300e-15,
            tau_max_s: 300e-15,
            tau_step_s: 0.1e-15,
            theta_min: 0.0,
            theta_max: 10.0 * PI,
            theta_steps: 501,
            grid_n: 512,
            grid_l: 16.0,
            omega_nodes: 129,
            samples: 100,
            words: 200,
            max_word_len: 8,
            seed: 1,
            out_dir: PathBuf::from(DEFAULT_OUT_DIR),
        }
    }

    /// Number of delay samples implied by the range and step.
    pub fn tau_steps(&self) -> usize {
        ((self.tau_max_s - self.tau_min_s) / self.tau_step_s).round() as usize + 1
    }

    pub fn validate(&self) -> Result<(), CliError> {
        fn positive(flag: &'static str, v: f64) -> Result<(), CliError> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(CliError::numeric(
                    flag,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        }
        fn finite(flag: &'static str, v: f64) -> Result<(), CliError> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(CliError::numeric(flag, format!("must be finite, got {v}")))
            }
        }
        positive("--lambda-p", self.lambda_p_nm)?;
        positive("--filter-center", self.filter_center_nm)?;
        positive("--filter-fwhm", self.filter_fwhm_nm)?;
        positive("--crystal-thickness-mm", self.crystal_thickness_mm)?;
        finite("--plate-theta", self.plate_theta)?;
        finite("--tau-min", self.tau_min_s)?;
        finite("--tau-max", self.tau_max_s)?;
        positive("--tau-step", self.tau_step_s)?;
        if self.tau_min_s >= self.tau_max_s {
            return Err(CliError::numeric(
                "--tau-max",
                format!(
                    "must exceed --tau-min ({} >= {})",
                    self.tau_min_s, self.tau_max_s
                ),
            ));
        }
        if self.tau_steps() > 10_000_000 {
            return Err(CliError::numeric(
                "--tau-step",
                "yields more than 1e7 samples".into(),
            ));
        }
        finite("--min", self.theta_min)?;
        finite("--max", self.theta_max)?;
        if self.theta_steps < 2 {
            return Err(CliError::numeric("--steps", "need at least 2 steps".into()));
        }
        if self.grid_n == 0 || !self.grid_n.is_multiple_of(2) {
            return Err(CliError::numeric(
                "--grid-n",
                format!("must be even and positive, got {}", self.grid_n),
            ));
        }
        positive("--grid-l", self.grid_l)?;
        if self.omega_nodes == 0 {
            return Err(CliError::numeric(
                "--omega-nodes",
                "must be positive".into(),
            ));
        }
        if self.samples < 2 {
            return Err(CliError::numeric(
                "--samples",
                "need at least 2 samples".into(),
            ));
        }
        if self.words == 0 {
            return Err(CliError::numeric("--words", "must be positive".into()));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Usage(format!("cannot encode config: {e}")))
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))
    }
}
