use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Experiment, RunConfig, DEFAULT_OUT_DIR, OUT_DIR_ENV};
use crate::csv::{fit_theta_sweep_csv, format_f64};
use crate::error::CliError;
use crate::experiments::run;

const FS: f64 = 1e-15;

#[derive(Debug, Parser)]
#[command(
    name = "parity-sim",
    version,
    about = "Spatial-parity two-photon interferometry simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Interferogram through a traditional Mach–Zehnder interferometer.
    Mzi(InterferogramArgs),
    /// Interferogram through the parity-sensitive interferometer.
    Psmzi(InterferogramArgs),
    /// Zero-delay coincidence versus pump plate phase.
    ThetaSweep(ThetaArgs),
    /// Concurrence of the i and real pump-superposition families.
    Concurrence(ConcurrenceArgs),
    /// Random element words: continuous evolution versus 2×2 matrices.
    Isomorphism(IsomorphismArgs),
    /// Re-run from a `*_config.toml` echo.
    Replay {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit A·sin²(kθ/2 + φ) + B to a theta-sweep CSV and print the result.
    Fit { csv: PathBuf },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Pump wavelength in nm.
    #[arg(long, value_name = "NM")]
    pub lambda_p: Option<f64>,
    /// Filter centre in nm [default: twice the pump wavelength].
    #[arg(long, value_name = "NM")]
    pub filter_center: Option<f64>,
    /// Filter bandwidth (FWHM) in nm.
    #[arg(long, value_name = "NM")]
    pub filter_fwhm: Option<f64>,
    /// Crystal thickness in mm; recorded only.
    #[arg(long, value_name = "MM")]
    pub crystal_thickness_mm: Option<f64>,
    /// Transverse grid size (even).
    #[arg(long, value_name = "N")]
    pub grid_n: Option<usize>,
    /// Transverse window length, centred on the axis.
    #[arg(long, value_name = "L")]
    pub grid_l: Option<f64>,
    /// Gauss–Legendre nodes for the frequency integral.
    #[arg(long, value_name = "N")]
    pub omega_nodes: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory [default: $PARITY_SIM_OUT_DIR, else ./out].
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InterferogramArgs {
    /// Pump plate phase in radians.
    #[arg(long, value_name = "RAD", allow_hyphen_values = true)]
    pub plate_theta: Option<f64>,
    #[arg(
        long,
        value_name = "S",
        allow_hyphen_values = true,
        conflicts_with = "tau_min_fs"
    )]
    pub tau_min: Option<f64>,
    #[arg(
        long,
        value_name = "S",
        allow_hyphen_values = true,
        conflicts_with = "tau_max_fs"
    )]
    pub tau_max: Option<f64>,
    #[arg(
        long,
        value_name = "S",
        allow_hyphen_values = true,
        conflicts_with = "tau_step_fs"
    )]
    pub tau_step: Option<f64>,
    #[arg(long, value_name = "FS", allow_hyphen_values = true)]
    pub tau_min_fs: Option<f64>,
    #[arg(long, value_name = "FS", allow_hyphen_values = true)]
    pub tau_max_fs: Option<f64>,
    #[arg(long, value_name = "FS", allow_hyphen_values = true)]
    pub tau_step_fs: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    /// First plate phase in radians.
    #[arg(long, value_name = "RAD", allow_hyphen_values = true)]
    pub min: Option<f64>,
    /// Last plate phase in radians.
    #[arg(long, value_name = "RAD", allow_hyphen_values = true)]
    pub max: Option<f64>,
    #[arg(long, value_name = "N")]
    pub steps: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ConcurrenceArgs {
    /// Samples of the superposition angle over [0, π].
    #[arg(long, value_name = "N")]
    pub samples: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct IsomorphismArgs {
    #[arg(long, value_name = "N")]
    pub words: Option<usize>,
    #[arg(long, value_name = "N")]
    pub max_word_len: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

/// `--out`, then the environment variable, then `fallback`.
fn resolve_out_dir(flag: Option<PathBuf>, fallback: PathBuf) -> PathBuf {
    flag.or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    })
    .unwrap_or(fallback)
}

impl CommonArgs {
    fn apply(self, cfg: &mut RunConfig) {
        set(&mut cfg.lambda_p_nm, self.lambda_p);
        cfg.filter_center_nm = self.filter_center.unwrap_or(2.0 * cfg.lambda_p_nm);
        set(&mut cfg.filter_fwhm_nm, self.filter_fwhm);
        set(&mut cfg.crystal_thickness_mm, self.crystal_thickness_mm);
        set(&mut cfg.grid_n, self.grid_n);
        set(&mut cfg.grid_l, self.grid_l);
        set(&mut cfg.omega_nodes, self.omega_nodes);
        set(&mut cfg.seed, self.seed);
        cfg.out_dir = resolve_out_dir(self.out, PathBuf::from(DEFAULT_OUT_DIR));
    }
}

impl InterferogramArgs {
    fn into_config(self, experiment: Experiment) -> RunConfig {
        let mut cfg = RunConfig::new(experiment);
        set(&mut cfg.plate_theta, self.plate_theta);
        set(
            &mut cfg.tau_min_s,
            self.tau_min.or(self.tau_min_fs.map(|v| v * FS)),
        );
        set(
            &mut cfg.tau_max_s,
            self.tau_max.or(self.tau_max_fs.map(|v| v * FS)),
        );
        set(
            &mut cfg.tau_step_s,
            self.tau_step.or(self.tau_step_fs.map(|v| v * FS)),
        );
        self.common.apply(&mut cfg);
        cfg
    }
}

impl Command {
    /// Resolved configuration for the experiment subcommands; `None` for
    /// `replay` and `fit`.
    pub fn into_config(self) -> Option<RunConfig> {
        Some(match self {
            Command::Mzi(a) => a.into_config(Experiment::Mzi),
            Command::Psmzi(a) => a.into_config(Experiment::Psmzi),
            Command::ThetaSweep(a) => {
                let mut cfg = RunConfig::new(Experiment::ThetaSweep);
                set(&mut cfg.theta_min, a.min);
                set(&mut cfg.theta_max, a.max);
                set(&mut cfg.theta_steps, a.steps);
                a.common.apply(&mut cfg);
                cfg
            }
            Command::Concurrence(a) => {
                let mut cfg = RunConfig::new(Experiment::Concurrence);
                set(&mut cfg.samples, a.samples);
                a.common.apply(&mut cfg);
                cfg
            }
            Command::Isomorphism(a) => {
                let mut cfg = RunConfig::new(Experiment::Isomorphism);
                set(&mut cfg.words, a.words);
                set(&mut cfg.max_word_len, a.max_word_len);
                a.common.apply(&mut cfg);
                cfg
            }
            Command::Replay { .. } | Command::Fit { .. } => return None,
        })
    }
}

/// Runs one parsed command and returns the text to print on success.
pub fn execute(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Replay { config, out } => {
            let text = fs::read_to_string(&config).map_err(|e| CliError::io(&config, e))?;
            let mut cfg = RunConfig::from_toml(&text)?;
            cfg.out_dir = resolve_out_dir(out, cfg.out_dir);
            report(&cfg)
        }
        Command::Fit { csv } => {
            let text = fs::read_to_string(&csv).map_err(|e| CliError::io(&csv, e))?;
            let fit = fit_theta_sweep_csv(&text)?;
            Ok(format!(
                "fit_amplitude={}\nfit_offset={}\nfit_period_rad={}\nfit_phase_rad={}\nfit_residual={}\n",
                format_f64(fit.amplitude),
                format_f64(fit.offset),
                format_f64(fit.period),
                format_f64(fit.phase),
                format_f64(fit.residual),
            ))
        }
        other => report(&other.into_config().expect("experiment subcommand")),
    }
}

fn report(cfg: &RunConfig) -> Result<String, CliError> {
    let a = run(cfg)?;
    Ok(format!(
        "{}\n{}\n{}\n",
        a.csv.display(),
        a.summary.display(),
        a.config.display()
    ))
}
