//! Downconverted photon pairs: the pump-parity to biphoton-parity map, the
//! Bell states, pure-state concurrence and the filter-limited spectrum.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::parity::{Parity, ParityQubit};

/// Vacuum speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Accepted deviation of `Σ|c_qr|²` from one.
pub const STATE_NORM_TOLERANCE: f64 = 1e-10;

/// Amplitudes `c[signal][idler]` over `{e, o} ⊗ {e, o}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonParityState {
    c: [[Complex64; 2]; 2],
}

impl TwoPhotonParityState {
    pub fn new(c: [[Complex64; 2]; 2]) -> Result<Self> {
        let s = Self { c };
        check_norm(s.norm_sqr())?;
        Ok(s)
    }

    pub fn normalized(c: [[Complex64; 2]; 2]) -> Result<Self> {
        let norm = Self { c }.norm_sqr().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::ZeroNorm);
        }
        let mut c = c;
        c.iter_mut().flatten().for_each(|z| *z /= norm);
        Ok(Self { c })
    }

    pub fn amplitude(&self, signal: Parity, idler: Parity) -> Complex64 {
        self.c[signal.index()][idler.index()]
    }

    pub fn amplitudes(&self) -> &[[Complex64; 2]; 2] {
        &self.c
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &TwoPhotonParityState) -> Complex64 {
        self.c
            .iter()
            .flatten()
            .zip(other.c.iter().flatten())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest componentwise distance after aligning the global phase.
    pub fn ray_distance(&self, other: &TwoPhotonParityState) -> f64 {
        let ov = other.inner(self);
        let phase = if ov.norm() > 0.0 {
            ov / ov.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.c
            .iter()
            .flatten()
            .zip(other.c.iter().flatten())
            .map(|(a, b)| (a - phase * b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest componentwise distance, no phase alignment.
    pub fn component_distance(&self, other: &TwoPhotonParityState) -> f64 {
        self.c
            .iter()
            .flatten()
            .zip(other.c.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Applies `signal ⊗ idler` local operators given as 2×2 arrays.
    pub fn local_transform(
        &self,
        signal: &[[Complex64; 2]; 2],
        idler: &[[Complex64; 2]; 2],
    ) -> TwoPhotonParityState {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (q, row) in out.iter_mut().enumerate() {
            for (r, slot) in row.iter_mut().enumerate() {
                for (a, c_row) in self.c.iter().enumerate() {
                    for (b, amp) in c_row.iter().enumerate() {
                        *slot += signal[q][a] * idler[r][b] * amp;
                    }
                }
            }
        }
        Self { c: out }
    }
}

fn check_norm(norm_sqr: f64) -> Result<()> {
    if (norm_sqr - 1.0).abs() > STATE_NORM_TOLERANCE {
        return Err(Error::Normalization { norm_sqr });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

pub fn bell_state(label: BellState) -> TwoPhotonParityState {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    let c = match label {
        BellState::PhiPlus => [[h, z], [z, h]],
        BellState::PhiMinus => [[h, z], [z, -h]],
        BellState::PsiPlus => [[z, h], [h, z]],
        BellState::PsiMinus => [[z, h], [-h, z]],
    };
    TwoPhotonParityState { c }
}

/// Pump parity to pair parity: `a|e⟩ + b|o⟩ -> a|Φ⁺⟩ + b|Ψ⁺⟩`.
pub fn pump_to_biphoton(pump: &ParityQubit) -> Result<TwoPhotonParityState> {
    let norm_sqr = pump.norm_sqr();
    if (norm_sqr - 1.0).abs() > STATE_NORM_TOLERANCE {
        return Err(Error::Normalization { norm_sqr });
    }
    let same = pump.alpha_e() * FRAC_1_SQRT_2;
    let opposite = pump.alpha_o() * FRAC_1_SQRT_2;
    Ok(TwoPhotonParityState {
        c: [[same, opposite], [opposite, same]],
    })
}

/// Pure-state concurrence `2|c_ee c_oo - c_eo c_oe|`.
pub fn concurrence(s: &TwoPhotonParityState) -> Result<f64> {
    check_norm(s.norm_sqr())?;
    let [[ee, eo], [oe, oo]] = s.c;
    Ok((2.0 * (ee * oo - eo * oe).norm()).min(1.0))
}

/// Gaussian frequency-deviation envelope `f(Ω) ∝ exp(-Ω²/2σ²)` about half
/// the pump frequency, normalized so that `∫ f² dΩ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralAmplitude {
    pump_wavelength_nm: f64,
    sigma_omega: f64,
}

impl SpectralAmplitude {
    /// Envelope with an explicit width `sigma_omega` in rad/s.
    pub fn new(pump_wavelength_nm: f64, sigma_omega: f64) -> Result<Self> {
        if !(pump_wavelength_nm.is_finite() && pump_wavelength_nm > 0.0) {
            return Err(Error::Domain(format!(
                "pump wavelength must be positive, got {pump_wavelength_nm} nm"
            )));
        }
        if !(sigma_omega.is_finite() && sigma_omega > 0.0) {
            return Err(Error::Domain(format!(
                "spectral width must be positive, got {sigma_omega} rad/s"
            )));
        }
        Ok(Self {
            pump_wavelength_nm,
            sigma_omega,
        })
    }

    pub fn pump_wavelength_nm(&self) -> f64 {
        self.pump_wavelength_nm
    }

    pub fn sigma_omega(&self) -> f64 {
        self.sigma_omega
    }

    /// `ω_p` in rad/s.
    pub fn pump_omega(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / (self.pump_wavelength_nm * 1e-9)
    }

    /// `ω_p / 2`, the degenerate signal/idler frequency.
    pub fn center_omega(&self) -> f64 {
        0.5 * self.pump_omega()
    }

    /// Optical period of the pump, `λ_p / c`.
    pub fn pump_period(&self) -> f64 {
        self.pump_wavelength_nm * 1e-9 / SPEED_OF_LIGHT
    }

    /// `f(Ω)`.
    pub fn amplitude(&self, detuning: f64) -> f64 {
        let s = self.sigma_omega;
        let u = detuning / s;
        (PI * s * s).powf(-0.25) * (-0.5 * u * u).exp()
    }
}

/// Spectrum set by an interference filter of FWHM `filter_fwhm_nm` centred at
/// `filter_center_nm`, for degenerate downconversion of a `pump_nm` pump.
pub fn make_spectrum(
    pump_nm: f64,
    filter_center_nm: f64,
    filter_fwhm_nm: f64,
) -> Result<SpectralAmplitude> {
    for (name, v) in [
        ("pump wavelength", pump_nm),
        ("filter center", filter_center_nm),
        ("filter bandwidth", filter_fwhm_nm),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain(format!(
                "{name} must be positive, got {v} nm"
            )));
        }
    }
    if (filter_center_nm - 2.0 * pump_nm).abs() > 0.01 * 2.0 * pump_nm {
        return Err(Error::Domain(format!(
            "filter center {filter_center_nm} nm is not degenerate with a {pump_nm} nm pump"
        )));
    }
    let lambda_f = filter_center_nm * 1e-9;
    let delta_nu = SPEED_OF_LIGHT * filter_fwhm_nm * 1e-9 / (lambda_f * lambda_f);
    let fwhm_omega = 2.0 * PI * delta_nu;
    let sigma = fwhm_omega / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt());
    SpectralAmplitude::new(pump_nm, sigma)
}

/// Bandwidth in Hz implied by a filter, `c Δλ / λ²`.
pub fn filter_bandwidth_hz(filter_center_nm: f64, filter_fwhm_nm: f64) -> f64 {
    let lambda = filter_center_nm * 1e-9;
    SPEED_OF_LIGHT * filter_fwhm_nm * 1e-9 / (lambda * lambda)
}
