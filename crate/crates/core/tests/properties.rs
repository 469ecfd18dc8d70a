use std::f64::consts::PI;

use num_complex::Complex64;
use parity_sim::elements::sequence_matrix;
use parity_sim::{
    apply_pf, apply_pr, apply_sequence, apply_sf, make_spectrum, parity_decompose, poincare_coords,
    pump_to_biphoton, qubit_extract, Element, Grid, Interferometer, ParityQubit, ReferenceBasis,
    SpatialMode,
};
use proptest::prelude::*;

fn element() -> impl Strategy<Value = Element> {
    prop_oneof![
        Just(Element::ParityFlip),
        Just(Element::SpatialFlip),
        Just(Element::Identity),
        (-10.0..10.0f64).prop_map(Element::ParityRotate),
    ]
}

fn qubit() -> impl Strategy<Value = ParityQubit> {
    (0.0..PI, -PI..PI, -PI..PI).prop_map(|(t, a, b)| {
        ParityQubit::new(
            Complex64::from_polar((t / 2.0).cos(), a),
            Complex64::from_polar((t / 2.0).sin(), b),
        )
        .unwrap()
    })
}

/// Smooth localized mode with no particular symmetry.
fn generic_mode() -> impl Strategy<Value = SpatialMode> {
    (-2.0..2.0f64, 0.3..2.0f64, -3.0..3.0f64, -1.0..1.0f64).prop_map(|(c, w, k, a)| {
        SpatialMode::from_fn(Grid::default(), |x| {
            Complex64::from_polar((-((x - c) / w).powi(2)).exp(), k * x) + a * x * (-x * x).exp()
        })
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn element_words_match_matrix_products(
        word in proptest::collection::vec(element(), 0..=8),
        start in qubit(),
    ) {
        let basis = ReferenceBasis::gaussian(Grid::default());
        let out = apply_sequence(&basis.mode_for(&start), &word);
        let continuous = qubit_extract(&out, &basis).unwrap();
        let predicted = sequence_matrix(&word).apply(&start);
        prop_assert!(continuous.ray_distance(&predicted) < 1e-8);
    }

    #[test]
    fn elements_preserve_norm(m in generic_mode(), theta in -10.0..10.0f64) {
        for e in [Element::ParityFlip, Element::SpatialFlip, Element::ParityRotate(theta), Element::Identity] {
            prop_assert!((e.apply(&m).norm_sqr() - m.norm_sqr()).abs() < 1e-12);
            prop_assert!(e.matrix().unitarity_defect() < 1e-12);
        }
    }

    #[test]
    fn flips_are_exact_involutions(m in generic_mode()) {
        prop_assert_eq!(apply_pf(&apply_pf(&m)), m.clone());
        prop_assert_eq!(apply_sf(&apply_sf(&m)), m);
    }

    #[test]
    fn flips_anticommute_on_the_subspace(q in qubit()) {
        let basis = ReferenceBasis::gaussian(Grid::default());
        let m = basis.mode_for(&q);
        let a = qubit_extract(&apply_pf(&apply_sf(&m)), &basis).unwrap();
        let b = qubit_extract(&apply_sf(&apply_pf(&m)), &basis).unwrap();
        let minus_b = b.with_global_phase(PI);
        prop_assert!(a.component_distance(&minus_b) < 1e-10);
    }

    #[test]
    fn rotator_group_law(m in generic_mode(), t1 in -10.0..10.0f64, t2 in -10.0..10.0f64) {
        let two = apply_pr(&apply_pr(&m, t1), t2);
        let one = apply_pr(&m, t1 + t2);
        prop_assert!(two.max_abs_diff(&one).unwrap() < 1e-13);
    }

    #[test]
    fn parity_populations_sum_to_one(m in generic_mode()) {
        let parts = parity_decompose(&m);
        prop_assert!((parts.p_even + parts.p_odd - 1.0).abs() < 1e-12);
        for k in 0..m.grid().len() {
            let back = parts.even[k] + parts.odd[k];
            prop_assert!((back - m.amplitudes()[k]).norm() <= 1e-15);
        }
    }

    #[test]
    fn poincare_vector_is_unit_and_phase_blind(q in qubit(), gamma in -PI..PI) {
        let s = poincare_coords(&q);
        prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        let t = poincare_coords(&q.with_global_phase(gamma));
        prop_assert!((s.s1 - t.s1).abs() < 1e-15);
        prop_assert!((s.s2 - t.s2).abs() < 1e-15);
        prop_assert!((s.s3 - t.s3).abs() < 1e-15);
    }

    #[test]
    fn outcome_probabilities_are_conserved(
        q in qubit(),
        tau in -3e-13..3e-13f64,
        has_sf in any::<bool>(),
    ) {
        let spec = make_spectrum(405.0, 810.0, 10.0).unwrap();
        let ifm = if has_sf { Interferometer::parity_sensitive() } else { Interferometer::traditional() };
        let state = pump_to_biphoton(&q).unwrap();
        let rates = ifm.outcome_rates(&state, &spec, tau).unwrap();
        prop_assert!((rates.total() - 1.0).abs() < 1e-8);
        prop_assert!(rates.coincidence() >= 0.0);
    }
}

#[test]
fn pump_trajectory_is_a_great_circle_through_the_poles() {
    let basis = ReferenceBasis::gaussian(Grid::default());
    let n = 200;
    let points: Vec<_> = (0..=n)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n as f64;
            poincare_coords(&qubit_extract(&apply_pr(basis.even(), theta), &basis).unwrap())
        })
        .collect();
    for p in &points {
        assert!(p.s1.abs() < 1e-10);
        assert!((p.norm() - 1.0).abs() < 1e-12);
    }
    let (first, last) = (points[0], points[n]);
    assert!((first.s3 - 1.0).abs() < 1e-12 && (last.s3 - 1.0).abs() < 1e-12);
    assert!((points[n / 2].s3 + 1.0).abs() < 1e-12);
}

#[test]
fn subspace_is_closed_under_long_words() {
    let basis = ReferenceBasis::gaussian(Grid::default());
    let word: Vec<Element> = (0..40)
        .map(|i| match i % 4 {
            0 => Element::ParityRotate(0.37 * i as f64),
            1 => Element::SpatialFlip,
            2 => Element::ParityFlip,
            _ => Element::ParityRotate(-1.1),
        })
        .collect();
    let out = apply_sequence(basis.even(), &word);
    assert!(qubit_extract(&out, &basis).is_ok());
}
