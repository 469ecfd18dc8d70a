#![allow(dead_code)]

use num_complex::Complex64;
use parity_sim::{Parity, SpectralAmplitude, TwoPhotonParityState};

/// Closed-form coincidence probability for a Gaussian spectrum, from the
/// full-line integrals
///   ∫ f² cos(ω₁τ) dΩ = cos(ω_p τ/2) e^{-σ²τ²/4},
///   ∫ f² cos(ω₁τ) cos(ω₂τ) dΩ = (cos ω_p τ + e^{-σ²τ²}) / 2,
/// with ω₁,₂ = ω_p/2 ± Ω and |f|² = e^{-Ω²/σ²} / (σ√π).
pub fn closed_form_g2(
    state: &TwoPhotonParityState,
    spec: &SpectralAmplitude,
    tau: f64,
    has_sf: bool,
) -> f64 {
    let wp = spec.pump_omega();
    let s2 = spec.sigma_omega().powi(2);
    let single = (0.5 * wp * tau).cos() * (-0.25 * s2 * tau * tau).exp();
    let pair = 0.5 * ((wp * tau).cos() + (-s2 * tau * tau).exp());
    let sign = |p: Parity| if has_sf { p.sign() } else { 1.0 };
    let mut weight_total = 0.0;
    let mut acc = 0.0;
    for q in Parity::BOTH {
        for r in Parity::BOTH {
            let w: Complex64 = state.amplitude(q, r) + state.amplitude(r, q);
            let w = w.norm_sqr();
            let (sq, sr) = (sign(q), sign(r));
            let integral = 1.0 - sq * single + sr * single - sq * sr * pair;
            acc += w * 0.25 * integral;
            weight_total += w;
        }
    }
    // weight_total is twice the exchange-symmetrized norm.
    2.0 * acc / weight_total
}

/// `cos(θ/2)|Φ⁺⟩ + i sin(θ/2)|Ψ⁺⟩` written out directly.
pub fn plate_state(theta: f64) -> TwoPhotonParityState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (s, c) = (theta / 2.0).sin_cos();
    let same = Complex64::new(c * h, 0.0);
    let opp = Complex64::new(0.0, s * h);
    TwoPhotonParityState::new([[same, opp], [opp, same]]).unwrap()
}
