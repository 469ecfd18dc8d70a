//! Half-plane phase plates and the spatial flipper, each available as a
//! continuous operator on [`SpatialMode`] and as a 2×2 matrix on
//! [`ParityQubit`] in the ordered basis `(|e⟩, |o⟩)`.

use std::fmt;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::parity::{ParityQubit, SpatialMode};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    /// π phase step between the half planes; σ_x.
    ParityFlip,
    /// Mirror, `ψ(x) -> ψ(-x)`; σ_z.
    SpatialFlip,
    /// Phase `θ` (radians) on the `x > 0` half plane.
    ParityRotate(f64),
    Identity,
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::ParityFlip => write!(f, "PF"),
            Element::SpatialFlip => write!(f, "SF"),
            Element::ParityRotate(theta) => write!(f, "PR({theta})"),
            Element::Identity => write!(f, "I"),
        }
    }
}

impl Element {
    pub fn apply(&self, m: &SpatialMode) -> SpatialMode {
        match *self {
            Element::ParityFlip => apply_pf(m),
            Element::SpatialFlip => apply_sf(m),
            Element::ParityRotate(theta) => apply_pr(m, theta),
            Element::Identity => m.clone(),
        }
    }

    pub fn matrix(&self) -> ElementMatrix {
        element_matrix(self)
    }
}

/// A 2×2 unitary acting on parity qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementMatrix(pub Matrix2<Complex64>);

impl ElementMatrix {
    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    /// `self · other`, i.e. `other` acts first.
    pub fn then_after(&self, other: &ElementMatrix) -> Self {
        Self(self.0 * other.0)
    }

    /// Largest entry of `M†M - I`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.0.adjoint() * self.0 - Matrix2::identity();
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Matrix-vector product. The result is renormalized so round-off in long
    /// products never trips the qubit norm check.
    pub fn apply(&self, q: &ParityQubit) -> ParityQubit {
        let v = self.0 * Vector2::new(q.alpha_e(), q.alpha_o());
        ParityQubit::normalized(v[0], v[1]).expect("unitary image of a unit vector is nonzero")
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `ψ(x) -> sgn(x) ψ(x)` with `sgn = +1` on `x > 0`.
pub fn apply_pf(m: &SpatialMode) -> SpatialMode {
    m.map_samples(|x, a| if x > 0.0 { a } else { -a })
}

/// `ψ(x) -> ψ(-x)`.
pub fn apply_sf(m: &SpatialMode) -> SpatialMode {
    m.reflected()
}

/// `ψ(x) -> e^{iθ} ψ(x)` on `x > 0`, unchanged on `x < 0`.
pub fn apply_pr(m: &SpatialMode, theta: f64) -> SpatialMode {
    let phase = Complex64::from_polar(1.0, theta);
    m.map_samples(|x, a| if x > 0.0 { a * phase } else { a })
}

/// Matrix form in `(|e⟩, |o⟩)`. The rotator keeps its `e^{iθ/2}` global
/// phase so that the matrix equals the literal plate action.
pub fn element_matrix(e: &Element) -> ElementMatrix {
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let m = match *e {
        Element::ParityFlip => Matrix2::new(zero, one, one, zero),
        Element::SpatialFlip => Matrix2::new(one, zero, zero, -one),
        Element::ParityRotate(theta) => {
            let g = Complex64::from_polar(1.0, theta / 2.0);
            let (s, co) = (theta / 2.0).sin_cos();
            Matrix2::new(g * co, g * c(0.0, s), g * c(0.0, s), g * co)
        }
        Element::Identity => Matrix2::identity(),
    };
    ElementMatrix(m)
}

/// Applies `elements` left to right.
pub fn apply_sequence(m: &SpatialMode, elements: &[Element]) -> SpatialMode {
    elements.iter().fold(m.clone(), |acc, e| e.apply(&acc))
}

/// Matrix of the word `elements` applied left to right (rightmost factor
/// acts first in the product).
pub fn sequence_matrix(elements: &[Element]) -> ElementMatrix {
    elements.iter().fold(ElementMatrix::identity(), |acc, e| {
        e.matrix().then_after(&acc)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parity::{overlap, qubit_extract, Grid, ReferenceBasis};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn basis() -> ReferenceBasis {
        ReferenceBasis::gaussian(Grid::default())
    }

    fn shifted(grid: Grid, center: f64) -> SpatialMode {
        SpatialMode::from_fn(grid, |x| c((-(x - center).powi(2)).exp(), 0.0)).unwrap()
    }

    #[test]
    fn pf_maps_g_to_chi_and_is_an_involution() {
        let b = basis();
        assert_eq!(&apply_pf(b.even()), b.odd());
        assert_eq!(&apply_pf(b.odd()), b.even());
        let m = shifted(*b.grid(), 0.6);
        assert_eq!(apply_pf(&apply_pf(&m)), m);
    }

    #[test]
    fn pf_fixes_the_plus_superposition() {
        let b = basis();
        let plus = ParityQubit::new(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)).unwrap();
        let m = b.mode_for(&plus);
        assert!(apply_pf(&m).max_abs_diff(&m).unwrap() < 1e-15);
    }

    #[test]
    fn sf_eigenvectors_and_reflection() {
        let b = basis();
        assert!(apply_sf(b.even()).max_abs_diff(b.even()).unwrap() < 1e-15);
        assert_eq!(apply_sf(b.odd()), b.odd().scaled(-1.0));
        let grid = *b.grid();
        let reflected = apply_sf(&shifted(grid, 1.0));
        assert!(reflected.max_abs_diff(&shifted(grid, -1.0)).unwrap() < 1e-15);
        let m = shifted(grid, 0.3);
        assert_eq!(apply_sf(&apply_sf(&m)), m);
    }

    #[test]
    fn pr_pi_turns_even_into_odd() {
        let b = basis();
        let out = apply_pr(b.even(), PI);
        assert!((overlap(b.odd(), &out).unwrap().norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pr_half_pi_gives_equal_i_superposition() {
        let b = basis();
        let q = qubit_extract(&apply_pr(b.even(), PI / 2.0), &b).unwrap();
        let target = ParityQubit::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)).unwrap();
        assert!(q.ray_distance(&target) < 1e-12);
    }

    #[test]
    fn pr_two_pi_is_a_full_turn() {
        let b = basis();
        let out = apply_pr(b.even(), 2.0 * PI);
        let q = qubit_extract(&out, &b).unwrap();
        assert!(q.ray_distance(&ParityQubit::EVEN) < 1e-12);
        // The plate itself is the identity at 2π; the rotation part alone is
        // -1, cancelled by the e^{iθ/2} prefactor.
        let m = element_matrix(&Element::ParityRotate(2.0 * PI));
        assert!((m.entry(0, 0) - 1.0).norm() < 1e-15);
        assert!(m.entry(0, 1).norm() < 1e-15);
        let (s, co) = PI.sin_cos();
        assert!((co + 1.0).abs() < 1e-15 && s.abs() < 1e-15);
    }

    #[test]
    fn pr_group_law() {
        let m = shifted(Grid::default(), 0.4);
        for (t1, t2) in [(0.3, 1.1), (-2.0, 5.5), (PI, PI)] {
            let two_step = apply_pr(&apply_pr(&m, t1), t2);
            let one_step = apply_pr(&m, t1 + t2);
            assert!(two_step.max_abs_diff(&one_step).unwrap() < 1e-14);
        }
    }

    #[test]
    fn fixed_matrices() {
        let pf = element_matrix(&Element::ParityFlip);
        assert_eq!(
            pf.0,
            Matrix2::new(c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.))
        );
        let sf = element_matrix(&Element::SpatialFlip);
        assert_eq!(
            sf.0,
            Matrix2::new(c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.))
        );
        assert_eq!(
            element_matrix(&Element::Identity),
            ElementMatrix::identity()
        );
    }

    #[test]
    fn pr_matrix_matches_continuous_action() {
        // Oracle: the columns of the matrix are the extracted images of g and
        // chi under the continuous plate, taken without any phase alignment.
        let b = basis();
        for theta in [0.1, 1.0, 2.5] {
            let m = element_matrix(&Element::ParityRotate(theta));
            for (col, input) in [b.even(), b.odd()].into_iter().enumerate() {
                let out = qubit_extract(&apply_pr(input, theta), &b).unwrap();
                assert!((out.alpha_e() - m.entry(0, col)).norm() < 1e-12);
                assert!((out.alpha_o() - m.entry(1, col)).norm() < 1e-12);
            }
            assert!(m.unitarity_defect() < 1e-15);
        }
    }

    #[test]
    fn sequence_of_two_sf_is_identity() {
        let m = shifted(Grid::default(), 0.9);
        let out = apply_sequence(&m, &[Element::SpatialFlip, Element::SpatialFlip]);
        assert_eq!(out, m);
    }

    #[test]
    fn pf_sf_anticommute_on_g() {
        let b = basis();
        let a = apply_sequence(b.even(), &[Element::ParityFlip, Element::SpatialFlip]);
        let r = apply_sequence(b.even(), &[Element::SpatialFlip, Element::ParityFlip]);
        assert!(a.max_abs_diff(&r.scaled(-1.0)).unwrap() < 1e-15);
    }

    #[test]
    fn six_element_word_matches_matrix_product() {
        let b = basis();
        let word = [
            Element::ParityRotate(0.7),
            Element::SpatialFlip,
            Element::ParityFlip,
            Element::ParityRotate(-1.9),
            Element::Identity,
            Element::SpatialFlip,
        ];
        let start = ParityQubit::normalized(c(0.6, 0.1), c(-0.2, 0.7)).unwrap();
        let continuous = qubit_extract(&apply_sequence(&b.mode_for(&start), &word), &b).unwrap();
        let predicted = sequence_matrix(&word).apply(&start);
        assert!(continuous.ray_distance(&predicted) < 1e-8);
    }
}
