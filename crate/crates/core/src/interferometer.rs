//! Two-photon coincidence interferograms of a balanced Mach–Zehnder
//! interferometer, with or without a spatial flipper in one arm.
//!
//! Both photons of a pair enter the same input port of the first
//! beamsplitter. Arm A carries the delay `τ`, arm B carries the flipper when
//! present. Beamsplitters are symmetric: transmission `1/√2`, reflection
//! `i/√2`. Detectors are ideal and blind to frequency and parity, so the
//! coincidence probability integrates the squared two-photon amplitude over
//! the frequency deviation `Ω` and sums over the parities.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::elements::apply_pr;
use crate::error::{Error, Result};
use crate::parity::{qubit_extract, Parity, ReferenceBasis};
use crate::quadrature::GaussLegendre;
use crate::spdc::{
    pump_to_biphoton, SpectralAmplitude, TwoPhotonParityState, STATE_NORM_TOLERANCE,
};

pub const DEFAULT_OMEGA_NODES: usize = 129;

/// Spectral integrals run over `±SPECTRAL_HALF_SPAN · σ_Ω`.
pub const SPECTRAL_HALF_SPAN: f64 = 5.0;

/// Below this many samples per pump period a sweep carries a warning.
pub const MIN_SAMPLES_PER_PERIOD: f64 = 8.0;

/// The baseline period starts at `τ = BASELINE_DELAY_WIDTHS / σ_Ω`.
pub const BASELINE_DELAY_WIDTHS: f64 = 10.0;

/// Points per pump period in period averages.
const PERIOD_AVERAGE_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InterferometerConfig {
    /// Spatial flipper in arm B: parity-sensitive MZI when set.
    pub has_sf: bool,
    /// Gauss–Legendre nodes for the `Ω` integral.
    pub omega_nodes: usize,
}

impl InterferometerConfig {
    pub fn traditional() -> Self {
        Self {
            has_sf: false,
            omega_nodes: DEFAULT_OMEGA_NODES,
        }
    }

    pub fn parity_sensitive() -> Self {
        Self {
            has_sf: true,
            omega_nodes: DEFAULT_OMEGA_NODES,
        }
    }

    pub fn with_nodes(self, omega_nodes: usize) -> Self {
        Self {
            omega_nodes,
            ..self
        }
    }
}

/// Output ports of the second beamsplitter. Port `d` collects the even
/// photon of a parity analyzer at zero delay, port `c` the odd one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Port {
    C,
    D,
}

impl Port {
    pub const BOTH: [Port; 2] = [Port::C, Port::D];
}

/// Single-photon amplitude from the input port to `port`.
///
/// With `σ` the flipper eigenvalue of `parity` (or `+1` without flipper):
/// `T_c = (e^{-iωτ} - σ)/2`, `T_d = i (e^{-iωτ} + σ)/2`.
pub fn port_transfer(
    omega: f64,
    parity: Parity,
    tau: f64,
    cfg: &InterferometerConfig,
    port: Port,
) -> Complex64 {
    let sigma = if cfg.has_sf { parity.sign() } else { 1.0 };
    let delayed = Complex64::from_polar(1.0, -omega * tau);
    match port {
        Port::C => (delayed - sigma) * 0.5,
        Port::D => Complex64::new(0.0, 0.5) * (delayed + sigma),
    }
}

/// Probabilities of the four ordered detection outcomes. The first letter is
/// the port of the photon at `ω_p/2 + Ω`, the second the port of its partner
/// at `ω_p/2 - Ω`; the four sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeRates {
    pub cc: f64,
    pub cd: f64,
    pub dc: f64,
    pub dd: f64,
}

impl OutcomeRates {
    /// One photon at each detector.
    pub fn coincidence(&self) -> f64 {
        self.cd + self.dc
    }

    pub fn total(&self) -> f64 {
        self.cc + self.cd + self.dc + self.dd
    }
}

/// State and spectrum sampled on the quadrature nodes, ready for repeated
/// evaluation at many delays.
struct PreparedPair {
    detunings: Vec<f64>,
    weights: Vec<f64>,
    /// `c_qr f(Ω) + c_rq f(-Ω)` per node, indexed `[q][r][node]`.
    symmetrized: [[Vec<Complex64>; 2]; 2],
    /// `Σ_qr ∫ |c_qr f(Ω) + c_rq f(-Ω)|² dΩ`, twice the norm of the
    /// exchange-symmetrized pair.
    norm: f64,
    center_omega: f64,
}

/// An interferometer with its quadrature rule built once.
#[derive(Debug, Clone)]
pub struct Interferometer {
    config: InterferometerConfig,
    rule: GaussLegendre,
}

impl Interferometer {
    pub fn new(config: InterferometerConfig) -> Self {
        assert!(config.omega_nodes > 0, "need at least one spectral node");
        Self {
            rule: GaussLegendre::new(config.omega_nodes),
            config,
        }
    }

    pub fn traditional() -> Self {
        Self::new(InterferometerConfig::traditional())
    }

    pub fn parity_sensitive() -> Self {
        Self::new(InterferometerConfig::parity_sensitive())
    }

    pub fn config(&self) -> &InterferometerConfig {
        &self.config
    }

    fn prepare(
        &self,
        state: &TwoPhotonParityState,
        spec: &SpectralAmplitude,
    ) -> Result<PreparedPair> {
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > STATE_NORM_TOLERANCE {
            return Err(Error::Normalization { norm_sqr });
        }
        let span = SPECTRAL_HALF_SPAN * spec.sigma_omega();
        let (detunings, weights): (Vec<f64>, Vec<f64>) = self.rule.scaled(-span, span).unzip();
        let mut symmetrized: [[Vec<Complex64>; 2]; 2] = Default::default();
        let mut norm = 0.0;
        for q in Parity::BOTH {
            for r in Parity::BOTH {
                let c_qr = state.amplitude(q, r);
                let c_rq = state.amplitude(r, q);
                let values: Vec<Complex64> = detunings
                    .iter()
                    .map(|&w| c_qr * spec.amplitude(w) + c_rq * spec.amplitude(-w))
                    .collect();
                norm += values
                    .iter()
                    .zip(&weights)
                    .map(|(v, wt)| wt * v.norm_sqr())
                    .sum::<f64>();
                symmetrized[q.index()][r.index()] = values;
            }
        }
        if norm < 1e-12 {
            return Err(Error::Domain(
                "pair amplitude vanishes under photon exchange (antisymmetric parity state \
                 with a symmetric spectrum)"
                    .into(),
            ));
        }
        Ok(PreparedPair {
            detunings,
            weights,
            symmetrized,
            norm,
            center_omega: spec.center_omega(),
        })
    }

    fn rates_prepared(&self, pair: &PreparedPair, tau: f64) -> OutcomeRates {
        let mut acc = [[0.0f64; 2]; 2];
        for q in Parity::BOTH {
            for r in Parity::BOTH {
                let values = &pair.symmetrized[q.index()][r.index()];
                for ((&w, &wt), amp) in pair.detunings.iter().zip(&pair.weights).zip(values) {
                    let p = amp.norm_sqr();
                    if p == 0.0 {
                        continue;
                    }
                    let upper = pair.center_omega + w;
                    let lower = pair.center_omega - w;
                    for (i, x) in Port::BOTH.into_iter().enumerate() {
                        let tx = port_transfer(upper, q, tau, &self.config, x).norm_sqr();
                        for (j, y) in Port::BOTH.into_iter().enumerate() {
                            let ty = port_transfer(lower, r, tau, &self.config, y).norm_sqr();
                            acc[i][j] += wt * p * tx * ty;
                        }
                    }
                }
            }
        }
        let n = pair.norm;
        OutcomeRates {
            cc: acc[0][0] / n,
            cd: acc[0][1] / n,
            dc: acc[1][0] / n,
            dd: acc[1][1] / n,
        }
    }

    fn period_average_prepared(&self, pair: &PreparedPair, period: f64, tau: f64) -> f64 {
        let m = PERIOD_AVERAGE_POINTS as f64;
        (0..PERIOD_AVERAGE_POINTS)
            .map(|j| {
                let t = tau + ((j as f64 + 0.5) / m - 0.5) * period;
                self.rates_prepared(pair, t).coincidence()
            })
            .sum::<f64>()
            / m
    }

    pub fn outcome_rates(
        &self,
        state: &TwoPhotonParityState,
        spec: &SpectralAmplitude,
        tau: f64,
    ) -> Result<OutcomeRates> {
        Ok(self.rates_prepared(&self.prepare(state, spec)?, tau))
    }

    /// Coincidence probability `G²(τ)`.
    pub fn coincidence_rate(
        &self,
        state: &TwoPhotonParityState,
        spec: &SpectralAmplitude,
        tau: f64,
    ) -> Result<f64> {
        Ok(self.outcome_rates(state, spec, tau)?.coincidence())
    }

    /// `G²` averaged over one pump period centred on `tau`; removes the
    /// pump-period fringe and leaves the two-photon envelope.
    pub fn period_averaged_rate(
        &self,
        state: &TwoPhotonParityState,
        spec: &SpectralAmplitude,
        tau: f64,
    ) -> Result<f64> {
        let pair = self.prepare(state, spec)?;
        Ok(self.period_average_prepared(&pair, spec.pump_period(), tau))
    }

    /// Mean of `G²` over the pump period starting at `τ = 10/σ_Ω`.
    pub fn baseline(&self, state: &TwoPhotonParityState, spec: &SpectralAmplitude) -> Result<f64> {
        let pair = self.prepare(state, spec)?;
        Ok(self.baseline_prepared(&pair, spec))
    }

    fn baseline_prepared(&self, pair: &PreparedPair, spec: &SpectralAmplitude) -> f64 {
        let period = spec.pump_period();
        let start = BASELINE_DELAY_WIDTHS / spec.sigma_omega();
        self.period_average_prepared(pair, period, start + 0.5 * period)
    }

    /// Samples `G²` on `n_steps` evenly spaced delays in `[tau_min, tau_max]`.
    pub fn sweep(
        &self,
        state: &TwoPhotonParityState,
        spec: &SpectralAmplitude,
        tau_min: f64,
        tau_max: f64,
        n_steps: usize,
    ) -> Result<Interferogram> {
        if !(tau_min.is_finite() && tau_max.is_finite() && tau_min < tau_max) {
            return Err(Error::Domain(format!(
                "delay range must satisfy tau_min < tau_max, got [{tau_min}, {tau_max}]"
            )));
        }
        if n_steps < 2 {
            return Err(Error::Domain(format!(
                "a sweep needs at least 2 steps, got {n_steps}"
            )));
        }
        let pair = self.prepare(state, spec)?;
        let step = (tau_max - tau_min) / (n_steps - 1) as f64;
        let taus: Vec<f64> = (0..n_steps)
            .map(|k| {
                if k == n_steps - 1 {
                    tau_max
                } else {
                    tau_min + k as f64 * step
                }
            })
            .collect();
        let g2_raw: Vec<f64> = taus
            .par_iter()
            .map(|&t| self.rates_prepared(&pair, t).coincidence())
            .collect();
        let baseline = self.baseline_prepared(&pair, spec);
        let g2_normalized = g2_raw
            .iter()
            .map(|g| {
                if baseline > 0.0 {
                    g / baseline
                } else {
                    f64::NAN
                }
            })
            .collect();
        let period = spec.pump_period();
        let samples_per_period = period / step;
        let warnings = if samples_per_period < MIN_SAMPLES_PER_PERIOD {
            vec![ResolutionWarning { samples_per_period }]
        } else {
            Vec::new()
        };
        Ok(Interferogram {
            taus,
            g2_raw,
            g2_normalized,
            baseline,
            config: self.config,
            plate_theta: None,
            pump_period: period,
            sigma_omega: spec.sigma_omega(),
            warnings,
        })
    }

    /// Period-averaged envelope at each delay in `taus`.
    pub fn envelope(
        &self,
        state: &TwoPhotonParityState,
        spec: &SpectralAmplitude,
        taus: &[f64],
    ) -> Result<Vec<f64>> {
        let pair = self.prepare(state, spec)?;
        let period = spec.pump_period();
        Ok(taus
            .par_iter()
            .map(|&t| self.period_average_prepared(&pair, period, t))
            .collect())
    }

    /// `G²(0)` as the pump plate phase runs over `n_steps` values in
    /// `[theta_min, theta_max]`. The pump is the reference even mode after a
    /// parity rotator.
    pub fn theta_sweep(
        &self,
        spec: &SpectralAmplitude,
        basis: &ReferenceBasis,
        theta_min: f64,
        theta_max: f64,
        n_steps: usize,
    ) -> Result<Vec<ThetaPoint>> {
        if !(theta_min.is_finite() && theta_max.is_finite()) || n_steps == 0 {
            return Err(Error::Domain(format!(
                "invalid plate-phase sweep [{theta_min}, {theta_max}] with {n_steps} steps"
            )));
        }
        let step = if n_steps > 1 {
            (theta_max - theta_min) / (n_steps - 1) as f64
        } else {
            0.0
        };
        (0..n_steps)
            .into_par_iter()
            .map(|k| {
                let theta = if k + 1 == n_steps && n_steps > 1 {
                    theta_max
                } else {
                    theta_min + k as f64 * step
                };
                let pump = qubit_extract(&apply_pr(basis.even(), theta), basis)?;
                let state = pump_to_biphoton(&pump)?;
                let g2 = self.coincidence_rate(&state, spec, 0.0)?;
                Ok(ThetaPoint { theta, g2 })
            })
            .collect()
    }
}

/// Convenience wrapper that builds the quadrature rule for a single call.
pub fn coincidence_rate(
    state: &TwoPhotonParityState,
    spec: &SpectralAmplitude,
    tau: f64,
    cfg: &InterferometerConfig,
) -> Result<f64> {
    Interferometer::new(*cfg).coincidence_rate(state, spec, tau)
}

pub fn interferogram_sweep(
    state: &TwoPhotonParityState,
    spec: &SpectralAmplitude,
    tau_min: f64,
    tau_max: f64,
    n_steps: usize,
    cfg: &InterferometerConfig,
) -> Result<Interferogram> {
    Interferometer::new(*cfg).sweep(state, spec, tau_min, tau_max, n_steps)
}

pub fn theta_sweep(
    spec: &SpectralAmplitude,
    basis: &ReferenceBasis,
    theta_min: f64,
    theta_max: f64,
    n_steps: usize,
    cfg: &InterferometerConfig,
) -> Result<Vec<ThetaPoint>> {
    Interferometer::new(*cfg).theta_sweep(spec, basis, theta_min, theta_max, n_steps)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaPoint {
    pub theta: f64,
    pub g2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolutionWarning {
    pub samples_per_period: f64,
}

/// A sampled coincidence interferogram.
#[derive(Debug, Clone, PartialEq)]
pub struct Interferogram {
    pub taus: Vec<f64>,
    pub g2_raw: Vec<f64>,
    /// `g2_raw / baseline`.
    pub g2_normalized: Vec<f64>,
    pub baseline: f64,
    pub config: InterferometerConfig,
    pub plate_theta: Option<f64>,
    pub pump_period: f64,
    pub sigma_omega: f64,
    pub warnings: Vec<ResolutionWarning>,
}

impl Interferogram {
    pub fn with_plate_theta(mut self, theta: f64) -> Self {
        self.plate_theta = Some(theta);
        self
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    fn window(&self, half_width: f64) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.taus
            .iter()
            .zip(&self.g2_raw)
            .enumerate()
            .filter(move |(_, (t, _))| t.abs() <= half_width)
            .map(|(i, (t, g))| (i, *t, *g))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Visibility {
    /// `|baseline - extremum| / baseline`.
    pub visibility: f64,
    /// Signed `(baseline - extremum) / baseline`: positive for a dip,
    /// negative for a peak.
    pub contrast: f64,
    /// Delay of the extremum used.
    pub extremum_tau: f64,
    /// Spacing of the pump-period fringe near zero delay; `None` when the
    /// interferogram carries no fringe.
    pub fringe_period: Option<f64>,
}

/// Relative fringe swing below which no period is reported.
const FRINGE_FLOOR: f64 = 1e-6;

/// Dip or peak visibility against the baseline, using the sample within one
/// pump period of `τ = 0` farthest from the baseline.
pub fn visibility(ig: &Interferogram) -> Result<Visibility> {
    if ig.baseline.abs() == 0.0 || !ig.baseline.is_finite() {
        return Err(Error::DegenerateBaseline);
    }
    let (_, extremum_tau, extremum) = ig
        .window(ig.pump_period)
        .max_by(|a, b| {
            (a.2 - ig.baseline)
                .abs()
                .total_cmp(&(b.2 - ig.baseline).abs())
        })
        .ok_or_else(|| Error::Domain("interferogram does not cover zero delay".into()))?;
    let contrast = (ig.baseline - extremum) / ig.baseline;
    Ok(Visibility {
        visibility: contrast.abs(),
        contrast,
        extremum_tau,
        fringe_period: fringe_period(ig),
    })
}

/// Mean spacing of the local maxima within ten pump periods of zero delay,
/// each located by a three-point parabola.
pub fn fringe_period(ig: &Interferogram) -> Option<f64> {
    let half = 10.0 * ig.pump_period;
    let idx: Vec<usize> = ig.window(half).map(|(i, _, _)| i).collect();
    let (lo, hi) = (*idx.first()?, *idx.last()?);
    let y = &ig.g2_raw;
    let (min, max) = y[lo..=hi]
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    if max - min <= FRINGE_FLOOR * ig.baseline.abs().max(f64::MIN_POSITIVE) {
        return None;
    }
    let peaks: Vec<f64> = (lo.max(1)..hi.min(y.len() - 1))
        .filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1])
        .map(|i| {
            let (a, b, c) = (y[i - 1], y[i], y[i + 1]);
            let denom = a - 2.0 * b + c;
            let offset = if denom != 0.0 {
                0.5 * (a - c) / denom
            } else {
                0.0
            };
            let h = ig.taus[i + 1] - ig.taus[i];
            ig.taus[i] + offset * h
        })
        .collect();
    if peaks.len() < 2 {
        return None;
    }
    Some((peaks[peaks.len() - 1] - peaks[0]) / (peaks.len() - 1) as f64)
}

/// Pump-period fringe near zero delay, `G² ≈ a + b u² + R cos(2πu + φ)` with
/// `u = τ / T_pump`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeFit {
    pub amplitude: f64,
    pub phase: f64,
}

/// Least-squares fringe fit over `|τ| <= periods · T_pump`.
pub fn fringe_phase(ig: &Interferogram, periods: f64) -> Result<FringeFit> {
    let pts: Vec<(f64, f64)> = ig
        .window(periods * ig.pump_period)
        .map(|(_, t, g)| (t / ig.pump_period, g))
        .collect();
    if pts.len() < 5 {
        return Err(Error::InsufficientData {
            needed: 5,
            got: pts.len(),
        });
    }
    let tau = std::f64::consts::TAU;
    let a = DMatrix::from_fn(pts.len(), 4, |i, j| {
        let u = pts[i].0;
        match j {
            0 => 1.0,
            1 => u * u,
            2 => (tau * u).cos(),
            _ => (tau * u).sin(),
        }
    });
    let b = DVector::from_iterator(pts.len(), pts.iter().map(|p| p.1));
    let x = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::DegenerateFit(e.to_string()))?;
    let (cos_c, sin_c) = (x[2], x[3]);
    Ok(FringeFit {
        amplitude: cos_c.hypot(sin_c),
        phase: (-sin_c).atan2(cos_c),
    })
}

/// Gaussian fit `baseline - envelope ≈ A exp(-τ²/w²)` of an envelope dip or
/// peak; `half_width` is the 1/e half-width `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeFit {
    pub depth: f64,
    pub half_width: f64,
}

pub fn fit_envelope(taus: &[f64], envelope: &[f64], baseline: f64) -> Result<EnvelopeFit> {
    let depth: Vec<f64> = envelope.iter().map(|e| baseline - e).collect();
    let peak = depth
        .iter()
        .fold(0.0f64, |m, d| if d.abs() > m.abs() { *d } else { m });
    if peak == 0.0 {
        return Err(Error::DegenerateFit("envelope is flat".into()));
    }
    let pts: Vec<(f64, f64)> = taus
        .iter()
        .zip(&depth)
        .filter(|(_, d)| *d / peak > 1e-2)
        .map(|(t, d)| (t * t, (d / peak).ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: pts.len(),
        });
    }
    let scale = pts.iter().map(|p| p.0).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::DegenerateFit(
            "all envelope samples at zero delay".into(),
        ));
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), p| (a + p.0 / scale, b + p.1));
    let (mx, my) = (sx / n, sy / n);
    let (sxx, sxy) = pts.iter().fold((0.0, 0.0), |(a, b), p| {
        let dx = p.0 / scale - mx;
        (a + dx * dx, b + dx * (p.1 - my))
    });
    if sxx == 0.0 {
        return Err(Error::DegenerateFit(
            "envelope samples share one delay".into(),
        ));
    }
    let slope = sxy / sxx / scale;
    if slope >= 0.0 {
        return Err(Error::DegenerateFit("envelope does not decay".into()));
    }
    Ok(EnvelopeFit {
        depth: peak * (my - slope * scale * mx).exp(),
        half_width: (-1.0 / slope).sqrt(),
    })
}
