//! Gauss–Legendre rule used for the spectral integrals.

use std::f64::consts::PI;

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule, exact for polynomials of degree `2n - 1`.
    ///
    /// Roots of `P_n` are found by Newton iteration from the Tricomi
    /// initial guess; weights are `2 / ((1 - x²) P_n'(x)²)`.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "quadrature needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn scaled(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.scaled(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rules_match_tabulated_values() {
        let r = GaussLegendre::new(2);
        let x = 1.0 / 3f64.sqrt();
        assert!((r.nodes()[0] + x).abs() < 1e-15 && (r.nodes()[1] - x).abs() < 1e-15);
        assert!(r.weights().iter().all(|w| (w - 1.0).abs() < 1e-15));

        let r = GaussLegendre::new(3);
        let x = (3.0f64 / 5.0).sqrt();
        assert!((r.nodes()[2] - x).abs() < 1e-15 && r.nodes()[1] == 0.0);
        assert!((r.weights()[1] - 8.0 / 9.0).abs() < 1e-15);
        assert!((r.weights()[0] - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1, 5, 64, 129, 258] {
            let total: f64 = GaussLegendre::new(n).weights().iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n = {n}: {total}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let r = GaussLegendre::new(6);
        for deg in 0..12 {
            let got = r.integrate(-1.0, 2.0, |x| x.powi(deg));
            let d = deg as f64 + 1.0;
            let want = (2f64.powf(d) - (-1f64).powf(d)) / d;
            assert!(
                (got - want).abs() < 1e-12 * want.abs().max(1.0),
                "deg {deg}"
            );
        }
    }

    #[test]
    fn integrates_oscillatory_gaussian() {
        // ∫_{-5}^{5} e^{-x²} cos(3x) dx ≈ √π e^{-9/4}; the tail beyond ±5
        // is below √π erfc(5) ≈ 2.7e-12.
        let r = GaussLegendre::new(129);
        let got = r.integrate(-5.0, 5.0, |x| (-x * x).exp() * (3.0 * x).cos());
        let want = PI.sqrt() * (-2.25f64).exp();
        assert!((got - want).abs() < 5e-12);
    }
}
