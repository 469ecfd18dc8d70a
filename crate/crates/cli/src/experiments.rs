use std::f64::consts::{FRAC_PI_4, PI, TAU};
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use parity_sim::elements::sequence_matrix;
use parity_sim::fit::{fit_theta_sweep, local_maxima, Lcg};
use parity_sim::interferometer::{fit_envelope, fringe_phase};
use parity_sim::{
    apply_pr, apply_sequence, bell_state, concurrence, make_spectrum, pump_to_biphoton,
    qubit_extract, visibility, BellState, Element, Grid, Interferometer, InterferometerConfig,
    ParityQubit, ReferenceBasis, SpectralAmplitude, TwoPhotonParityState,
};

use crate::config::{Experiment, RunConfig};
use crate::csv::{format_f64, numeric_row, render};
use crate::error::CliError;

/// Tolerance reported alongside the isomorphism deviations.
pub const ISOMORPHISM_TOLERANCE: f64 = 1e-8;

/// Flat `key=value` record, rendered one pair per line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary(pub Vec<(String, String)>);

impl Summary {
    fn push(&mut self, key: &str, value: impl Into<String>) {
        self.0.push((key.to_string(), value.into()));
    }

    fn num(&mut self, key: &str, value: f64) {
        self.push(key, format_f64(value));
    }

    fn opt(&mut self, key: &str, value: Option<f64>) {
        self.push(key, value.map_or_else(|| "none".to_string(), format_f64));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}

/// CSV text and summary of one experiment, before anything touches disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub csv: String,
    pub summary: Summary,
}

#[derive(Debug, Clone)]
pub struct Artifacts {
    pub csv: PathBuf,
    pub summary: PathBuf,
    pub config: PathBuf,
}

/// Validates `cfg`, computes the experiment and writes the CSV, summary and
/// config echo into `cfg.out_dir`.
pub fn run(cfg: &RunConfig) -> Result<Artifacts, CliError> {
    let outcome = compute(cfg)?;
    let config_text = cfg.to_toml()?;
    let dir = &cfg.out_dir;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let stem = cfg.experiment.name();
    let artifacts = Artifacts {
        csv: dir.join(format!("{stem}.csv")),
        summary: dir.join(format!("{stem}_summary.txt")),
        config: dir.join(format!("{stem}_config.toml")),
    };
    write(&artifacts.csv, &outcome.csv)?;
    write(&artifacts.summary, &outcome.summary.render())?;
    write(&artifacts.config, &config_text)?;
    Ok(artifacts)
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn compute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let mut summary = Summary::default();
    summary.push("experiment", cfg.experiment.name());
    summary.num("lambda_p_nm", cfg.lambda_p_nm);
    summary.num("filter_center_nm", cfg.filter_center_nm);
    summary.num("filter_fwhm_nm", cfg.filter_fwhm_nm);
    summary.num("crystal_thickness_mm", cfg.crystal_thickness_mm);
    let csv = match cfg.experiment {
        Experiment::Mzi => interferogram(cfg, InterferometerConfig::traditional(), &mut summary)?,
        Experiment::Psmzi => {
            interferogram(cfg, InterferometerConfig::parity_sensitive(), &mut summary)?
        }
        Experiment::ThetaSweep => plate_sweep(cfg, &mut summary)?,
        Experiment::Concurrence => concurrence_families(cfg, &mut summary)?,
        Experiment::Isomorphism => isomorphism(cfg, &mut summary)?,
    };
    Ok(Outcome { csv, summary })
}

fn spectrum(cfg: &RunConfig) -> Result<SpectralAmplitude, CliError> {
    make_spectrum(cfg.lambda_p_nm, cfg.filter_center_nm, cfg.filter_fwhm_nm)
        .map_err(|e| CliError::numeric("--filter-center", e.to_string()))
}

fn basis(cfg: &RunConfig) -> Result<ReferenceBasis, CliError> {
    Ok(ReferenceBasis::gaussian(Grid::new(
        cfg.grid_n,
        0.5 * cfg.grid_l,
    )?))
}

/// Biphoton generated by the reference even pump after a plate of phase
/// `theta`, propagated on the spatial grid.
fn plate_state(basis: &ReferenceBasis, theta: f64) -> Result<TwoPhotonParityState, CliError> {
    let pump = qubit_extract(&apply_pr(basis.even(), theta), basis)?;
    Ok(pump_to_biphoton(&pump)?)
}

fn interferogram(
    cfg: &RunConfig,
    ifm: InterferometerConfig,
    summary: &mut Summary,
) -> Result<String, CliError> {
    let spec = spectrum(cfg)?;
    let state = plate_state(&basis(cfg)?, cfg.plate_theta)?;
    let device = Interferometer::new(ifm.with_nodes(cfg.omega_nodes));
    let ig = device
        .sweep(&state, &spec, cfg.tau_min_s, cfg.tau_max_s, cfg.tau_steps())?
        .with_plate_theta(cfg.plate_theta);

    summary.num("plate_theta_rad", cfg.plate_theta);
    summary.push("samples", ig.len().to_string());
    summary.num("sigma_omega_rad_per_s", spec.sigma_omega());
    summary.num("pump_period_s", spec.pump_period());
    summary.num("baseline", ig.baseline);
    let vis = visibility(&ig)?;
    summary.num("visibility", vis.visibility);
    summary.num("contrast", vis.contrast);
    summary.num("extremum_tau_s", vis.extremum_tau);
    summary.opt("fringe_period_s", vis.fringe_period);
    let fringe = fringe_phase(&ig, 1.0).ok();
    summary.opt("fringe_amplitude", fringe.map(|f| f.amplitude));
    summary.opt("fringe_phase_rad", fringe.map(|f| f.phase));

    let width = 4.0 / spec.sigma_omega();
    let env_taus: Vec<f64> = (0..=80)
        .map(|k| -width + 2.0 * width * k as f64 / 80.0)
        .collect();
    let env = device.envelope(&state, &spec, &env_taus)?;
    let half_width = fit_envelope(&env_taus, &env, ig.baseline).ok();
    summary.opt("envelope_half_width_s", half_width.map(|f| f.half_width));
    summary.opt("envelope_depth", half_width.map(|f| f.depth));
    match ig.warnings.first() {
        Some(w) => summary.num(
            "resolution_warning_samples_per_period",
            w.samples_per_period,
        ),
        None => summary.push("resolution_warning_samples_per_period", "none"),
    }

    let rows: Vec<Vec<String>> = ig
        .taus
        .iter()
        .zip(&ig.g2_normalized)
        .zip(&ig.g2_raw)
        .map(|((t, n), r)| numeric_row(&[*t, *n, *r]))
        .collect();
    Ok(render(&["tau_s", "g2_normalized", "g2_raw"], &rows))
}

fn plate_sweep(cfg: &RunConfig, summary: &mut Summary) -> Result<String, CliError> {
    let spec = spectrum(cfg)?;
    let device =
        Interferometer::new(InterferometerConfig::parity_sensitive().with_nodes(cfg.omega_nodes));
    let points = device.theta_sweep(
        &spec,
        &basis(cfg)?,
        cfg.theta_min,
        cfg.theta_max,
        cfg.theta_steps,
    )?;
    let pairs: Vec<(f64, f64)> = points.iter().map(|p| (p.theta, p.g2)).collect();

    summary.num("theta_min_rad", cfg.theta_min);
    summary.num("theta_max_rad", cfg.theta_max);
    summary.push("samples", pairs.len().to_string());
    match fit_theta_sweep(&pairs) {
        Ok(fit) => {
            summary.num("fit_amplitude", fit.amplitude);
            summary.num("fit_offset", fit.offset);
            summary.num("fit_period_rad", fit.period);
            summary.num("fit_phase_rad", fit.phase);
            summary.num("fit_residual", fit.residual);
        }
        Err(e) => summary.push("fit_error", e.to_string()),
    }
    let maxima = local_maxima(&pairs);
    summary.push("maxima_count", maxima.len().to_string());
    summary.push(
        "maxima_theta_rad",
        maxima
            .iter()
            .map(|t| format_f64(*t))
            .collect::<Vec<_>>()
            .join(";"),
    );

    let rows: Vec<Vec<String>> = pairs.iter().map(|(t, g)| numeric_row(&[*t, *g])).collect();
    Ok(render(&["theta_rad", "g2_at_tau0"], &rows))
}

fn superposition(theta: f64, psi_coeff: Complex64) -> Result<TwoPhotonParityState, CliError> {
    let phi = bell_state(BellState::PhiPlus);
    let psi = bell_state(BellState::PsiPlus);
    let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (q, row) in c.iter_mut().enumerate() {
        for (r, slot) in row.iter_mut().enumerate() {
            *slot = theta.cos() * phi.amplitudes()[q][r] + psi_coeff * psi.amplitudes()[q][r];
        }
    }
    Ok(TwoPhotonParityState::new(c)?)
}

fn concurrence_families(cfg: &RunConfig, summary: &mut Summary) -> Result<String, CliError> {
    let n = cfg.samples;
    let mut rows = Vec::with_capacity(n);
    let (mut dev_i, mut dev_real) = (0.0f64, 0.0f64);
    for k in 0..n {
        let theta = PI * k as f64 / (n - 1) as f64;
        let c_i = concurrence(&superposition(theta, Complex64::new(0.0, theta.sin()))?)?;
        let c_r = concurrence(&superposition(theta, Complex64::new(theta.sin(), 0.0))?)?;
        let expected = (2.0 * theta).cos().abs();
        dev_i = dev_i.max((c_i - 1.0).abs());
        dev_real = dev_real.max((c_r - expected).abs());
        rows.push(numeric_row(&[theta, c_i, c_r, expected]));
    }
    let at_quarter = concurrence(&superposition(
        FRAC_PI_4,
        Complex64::new(FRAC_PI_4.sin(), 0.0),
    )?)?;
    summary.push("samples", n.to_string());
    summary.num("max_deviation_i_family", dev_i);
    summary.num("max_deviation_real_family", dev_real);
    summary.num("concurrence_real_at_quarter_pi", at_quarter);
    Ok(render(
        &[
            "theta_rad",
            "concurrence_i_family",
            "concurrence_real_family",
            "abs_cos_2theta",
        ],
        &rows,
    ))
}

/// Random word of at most `max_len` elements drawn from `rng`.
pub fn random_word(rng: &mut Lcg, max_len: usize) -> Vec<Element> {
    let len = (rng.next_u64() % (max_len as u64 + 1)) as usize;
    (0..len)
        .map(|_| match rng.next_u64() % 4 {
            0 => Element::ParityFlip,
            1 => Element::SpatialFlip,
            2 => Element::ParityRotate(rng.uniform_in(-TAU, TAU)),
            _ => Element::Identity,
        })
        .collect()
}

/// Uniformly distributed point on the Poincaré sphere.
pub fn random_qubit(rng: &mut Lcg) -> ParityQubit {
    let polar = (1.0 - 2.0 * rng.uniform()).clamp(-1.0, 1.0).acos();
    let azimuth = rng.uniform_in(0.0, TAU);
    ParityQubit::normalized(
        Complex64::new((polar / 2.0).cos(), 0.0),
        Complex64::from_polar((polar / 2.0).sin(), azimuth),
    )
    .expect("unit vector")
}

fn isomorphism(cfg: &RunConfig, summary: &mut Summary) -> Result<String, CliError> {
    let basis = basis(cfg)?;
    let mut rng = Lcg::new(cfg.seed);
    let mut rows = Vec::with_capacity(cfg.words);
    let mut worst = 0.0f64;
    for index in 0..cfg.words {
        let start = random_qubit(&mut rng);
        let word = random_word(&mut rng, cfg.max_word_len);
        let evolved = apply_sequence(&basis.mode_for(&start), &word);
        let continuous = qubit_extract(&evolved, &basis)?;
        let predicted = sequence_matrix(&word).apply(&start);
        let d = continuous.ray_distance(&predicted);
        worst = worst.max(d);
        let label = if word.is_empty() {
            "I".to_string()
        } else {
            word.iter()
                .map(Element::to_string)
                .collect::<Vec<_>>()
                .join(";")
        };
        rows.push(vec![
            index.to_string(),
            word.len().to_string(),
            label,
            format_f64(d),
        ]);
    }
    summary.push("seed", cfg.seed.to_string());
    summary.push("words", cfg.words.to_string());
    summary.push("max_word_len", cfg.max_word_len.to_string());
    summary.num("max_ray_distance", worst);
    summary.num("tolerance", ISOMORPHISM_TOLERANCE);
    summary.push("pass", (worst <= ISOMORPHISM_TOLERANCE).to_string());
    Ok(render(
        &["word_index", "word_length", "word", "ray_distance"],
        &rows,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(exp: Experiment) -> RunConfig {
        let mut cfg = RunConfig::new(exp);
        cfg.tau_min_s = -20e-15;
        cfg.tau_max_s = 20e-15;
        cfg.tau_step_s = 0.1e-15;
        cfg
    }

    #[test]
    fn psmzi_dip_is_deep() {
        let out = compute(&quick(Experiment::Psmzi)).unwrap();
        let vis: f64 = out.summary.get("visibility").unwrap().parse().unwrap();
        assert!(vis > 0.99);
        assert!(out.csv.starts_with("tau_s,g2_normalized,g2_raw\n"));
    }

    #[test]
    fn concurrence_summary_reports_laws() {
        let out = compute(&RunConfig::new(Experiment::Concurrence)).unwrap();
        let get = |k| out.summary.get(k).unwrap().parse::<f64>().unwrap();
        assert!(get("max_deviation_i_family") < 1e-10);
        assert!(get("max_deviation_real_family") < 1e-10);
        assert!(get("concurrence_real_at_quarter_pi") < 1e-10);
    }

    #[test]
    fn isomorphism_passes_and_is_seeded() {
        let mut cfg = RunConfig::new(Experiment::Isomorphism);
        cfg.words = 20;
        let a = compute(&cfg).unwrap();
        assert_eq!(a.summary.get("pass"), Some("true"));
        assert_eq!(a, compute(&cfg).unwrap());
        cfg.seed = 2;
        assert_ne!(a.csv, compute(&cfg).unwrap().csv);
    }

    #[test]
    fn non_degenerate_filter_names_the_flag() {
        let mut cfg = quick(Experiment::Mzi);
        cfg.filter_center_nm = 1550.0;
        let err = compute(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("--filter-center"));
    }
}
