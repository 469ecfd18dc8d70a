mod common;

use std::f64::consts::PI;

use common::{closed_form_g2, plate_state};
use parity_sim::interferometer::{fit_envelope, fringe_period, fringe_phase, visibility};
use parity_sim::{
    bell_state, make_spectrum, BellState, Grid, Interferometer, InterferometerConfig,
    ReferenceBasis, SpectralAmplitude,
};

fn spec() -> SpectralAmplitude {
    make_spectrum(405.0, 810.0, 10.0).unwrap()
}

fn taus(n: usize, half: f64) -> Vec<f64> {
    (0..n)
        .map(|k| -half + 2.0 * half * k as f64 / (n - 1) as f64)
        .collect()
}

#[test]
fn quadrature_matches_closed_form() {
    let s = spec();
    let reach = 12.0 / s.sigma_omega();
    for ifm in [
        Interferometer::traditional(),
        Interferometer::parity_sensitive(),
    ] {
        for state in [
            bell_state(BellState::PhiPlus),
            bell_state(BellState::PsiPlus),
            bell_state(BellState::PhiMinus),
            plate_state(0.7),
            plate_state(2.2),
        ] {
            for &t in taus(301, reach).iter() {
                let got = ifm.coincidence_rate(&state, &s, t).unwrap();
                let want = closed_form_g2(&state, &s, t, ifm.config().has_sf);
                assert!((got - want).abs() < 1e-8, "τ = {t}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn doubling_spectral_nodes_changes_little() {
    let s = spec();
    let coarse = Interferometer::parity_sensitive();
    let fine = Interferometer::new(InterferometerConfig::parity_sensitive().with_nodes(258));
    let state = plate_state(PI / 6.0);
    for &t in taus(201, 15.0 / s.sigma_omega()).iter() {
        let a = coarse.coincidence_rate(&state, &s, t).unwrap();
        let b = fine.coincidence_rate(&state, &s, t).unwrap();
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn traditional_mzi_is_parity_blind() {
    let s = spec();
    let ifm = Interferometer::traditional();
    let n = 801;
    let reference = ifm.sweep(&plate_state(0.0), &s, -1e-13, 1e-13, n).unwrap();
    for theta in [PI / 2.0, PI, 1.234] {
        let other = ifm
            .sweep(&plate_state(theta), &s, -1e-13, 1e-13, n)
            .unwrap();
        for (a, b) in reference.g2_raw.iter().zip(&other.g2_raw) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn psmzi_dip_peak_and_flat() {
    let s = spec();
    let ifm = Interferometer::parity_sensitive();
    let dip = ifm
        .sweep(&plate_state(0.0), &s, -2e-13, 2e-13, 4001)
        .unwrap();
    let v = visibility(&dip).unwrap();
    assert!(v.visibility > 0.99 && v.contrast > 0.0);
    let period = v.fringe_period.unwrap();
    assert!((period - s.pump_period()).abs() < 1e-3 * s.pump_period());

    let peak = ifm
        .sweep(&plate_state(PI), &s, -2e-13, 2e-13, 4001)
        .unwrap();
    let v = visibility(&peak).unwrap();
    assert!(v.contrast < 0.0);
    let max = peak.g2_normalized.iter().cloned().fold(f64::MIN, f64::max);
    assert!(max > 1.9);

    let flat = ifm
        .sweep(&plate_state(PI / 2.0), &s, -2e-13, 2e-13, 801)
        .unwrap();
    let v = visibility(&flat).unwrap();
    assert!(v.visibility < 0.02);
    assert_eq!(v.fringe_period, None);
}

#[test]
fn dip_and_peak_fringes_are_in_antiphase() {
    let s = spec();
    let ifm = Interferometer::parity_sensitive();
    let dip = ifm
        .sweep(&plate_state(0.0), &s, -5e-15, 5e-15, 401)
        .unwrap();
    let peak = ifm.sweep(&plate_state(PI), &s, -5e-15, 5e-15, 401).unwrap();
    let a = fringe_phase(&dip, 3.0).unwrap();
    let b = fringe_phase(&peak, 3.0).unwrap();
    let diff = (a.phase - b.phase).rem_euclid(2.0 * PI);
    assert!((diff - PI).abs() < 2f64.to_radians(), "{diff}");
}

#[test]
fn envelope_is_even_in_delay() {
    let s = spec();
    let ifm = Interferometer::parity_sensitive();
    let ts: Vec<f64> = (0..40).map(|k| k as f64 * 5e-15).collect();
    let neg: Vec<f64> = ts.iter().map(|t| -t).collect();
    for state in [plate_state(0.0), plate_state(PI), plate_state(0.9)] {
        let a = ifm.envelope(&state, &s, &ts).unwrap();
        let b = ifm.envelope(&state, &s, &neg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn envelope_width_follows_inverse_bandwidth() {
    let ifm = Interferometer::parity_sensitive();
    let state = plate_state(0.0);
    let mut widths = Vec::new();
    for fwhm in [10.0, 5.0] {
        let s = make_spectrum(405.0, 810.0, fwhm).unwrap();
        let ts: Vec<f64> = (0..80)
            .map(|k| k as f64 * 4.0 / s.sigma_omega() / 79.0)
            .collect();
        let env = ifm.envelope(&state, &s, &ts).unwrap();
        let base = ifm.baseline(&state, &s).unwrap();
        let fit = fit_envelope(&ts, &env, base).unwrap();
        assert!((fit.half_width * s.sigma_omega() - 1.0).abs() < 0.01);
        widths.push(fit.half_width);
    }
    assert!((widths[1] / widths[0] - 2.0).abs() < 0.1);
}

#[test]
fn theta_sweep_follows_sin_squared() {
    let s = spec();
    let basis = ReferenceBasis::gaussian(Grid::default());
    let ifm = Interferometer::parity_sensitive();
    let rows = ifm.theta_sweep(&s, &basis, 0.0, 4.0 * PI, 97).unwrap();
    for p in rows {
        assert!((p.g2 - (p.theta / 2.0).sin().powi(2)).abs() < 1e-10);
    }
}

#[test]
fn fringe_period_of_traditional_mzi() {
    let s = spec();
    let ig = Interferometer::traditional()
        .sweep(&bell_state(BellState::PsiPlus), &s, -1e-13, 1e-13, 2000)
        .unwrap();
    let p = fringe_period(&ig).unwrap();
    assert!((p - 1.3509345855525158e-15).abs() < 1e-3 * p);
}
