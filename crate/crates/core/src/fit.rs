//! Sinusoidal fit of plate-phase sweeps, peak finding and the seeded noise
//! source used by the robustness checks.

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};

use crate::error::{Error, Result};

/// Minimum number of rows accepted by [`fit_theta_sweep`].
pub const MIN_FIT_ROWS: usize = 8;

/// Result of fitting `A sin²(θ/2·(2π/P) + φ) + B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaFit {
    pub amplitude: f64,
    pub offset: f64,
    /// Period in plate phase; `2π` for a pump rotated once per turn.
    pub period: f64,
    /// `φ`, wrapped into `(-π/2, π/2]`.
    pub phase: f64,
    /// Root-mean-square residual.
    pub residual: f64,
}

/// Linear least squares of `y ≈ c0 + a cos(k u) + b sin(k u)` at fixed `k`,
/// solved through the 3×3 normal equations.
fn linear_part(u: &[f64], y: &[f64], k: f64) -> Option<([f64; 3], f64)> {
    let mut m = [[0.0f64; 3]; 3];
    let mut v = [0.0f64; 3];
    for (ui, yi) in u.iter().zip(y) {
        let (s, co) = (k * ui).sin_cos();
        let row = [1.0, co, s];
        for i in 0..3 {
            v[i] += row[i] * yi;
            for j in 0..3 {
                m[i][j] += row[i] * row[j];
            }
        }
    }
    let x = Matrix3::from_fn(|i, j| m[i][j])
        .cholesky()?
        .solve(&Vector3::from(v));
    let rss = u
        .iter()
        .zip(y)
        .map(|(ui, yi)| {
            let (s, co) = (k * ui).sin_cos();
            (yi - x[0] - x[1] * co - x[2] * s).powi(2)
        })
        .sum();
    Some(([x[0], x[1], x[2]], rss))
}

fn rss_at(u: &[f64], y: &[f64], k: f64) -> f64 {
    linear_part(u, y, k).map_or(f64::INFINITY, |(_, r)| r)
}

/// Fits `A sin²(kθ/2 + φ) + B` with the frequency `k` free and reports the
/// period `2π/k`.
///
/// The frequency is located by a scan of the profiled residual followed by
/// golden-section refinement; all four parameters are then polished with
/// Gauss–Newton steps.
pub fn fit_theta_sweep(rows: &[(f64, f64)]) -> Result<ThetaFit> {
    if rows.len() < MIN_FIT_ROWS {
        return Err(Error::InsufficientData {
            needed: MIN_FIT_ROWS,
            got: rows.len(),
        });
    }
    if rows.iter().any(|(t, g)| !t.is_finite() || !g.is_finite()) {
        return Err(Error::Domain("non-finite value in sweep".into()));
    }
    let (lo, hi) = rows
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
            (a.min(r.0), b.max(r.0))
        });
    let span = hi - lo;
    if span <= 0.0 {
        return Err(Error::DegenerateFit(
            "all rows share one plate phase".into(),
        ));
    }
    let mid = 0.5 * (lo + hi);
    let u: Vec<f64> = rows.iter().map(|r| r.0 - mid).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let scale = y
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);

    let spacing = span / (rows.len() - 1) as f64;
    let k_max = std::f64::consts::PI / spacing;
    let dk = std::f64::consts::PI / (4.0 * span);
    let mut best = (f64::INFINITY, dk);
    let mut k = dk;
    while k <= k_max {
        let r = rss_at(&u, &y, k);
        if r < best.0 {
            best = (r, k);
        }
        k += dk;
    }

    // Golden section on [k* - dk, k* + dk].
    let (mut a, mut b) = ((best.1 - dk).max(0.5 * dk), best.1 + dk);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (rss_at(&u, &y, c), rss_at(&u, &y, d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-15 * b.abs() {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = rss_at(&u, &y, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = rss_at(&u, &y, d);
        }
    }
    let mut k = 0.5 * (a + b);
    let (mut p, mut rss) =
        linear_part(&u, &y, k).ok_or_else(|| Error::DegenerateFit("linear solve failed".into()))?;

    if p[1].hypot(p[2]) <= 1e-9 * scale {
        return Err(Error::DegenerateFit("no oscillation in sweep".into()));
    }

    for _ in 0..50 {
        let mut jtj = Matrix4::zeros();
        let mut jtr = Vector4::zeros();
        for (ui, yi) in u.iter().zip(&y) {
            let (s, co) = (k * ui).sin_cos();
            let row = Vector4::new(1.0, co, s, ui * (-p[1] * s + p[2] * co));
            jtj += row * row.transpose();
            jtr += row * (yi - (p[0] + p[1] * co + p[2] * s));
        }
        let Some(step) = jtj.lu().solve(&jtr) else {
            break;
        };
        let (np, nk) = (
            [p[0] + step[0], p[1] + step[1], p[2] + step[2]],
            k + step[3],
        );
        let nrss: f64 = u
            .iter()
            .zip(&y)
            .map(|(ui, yi)| {
                let (s, co) = (nk * ui).sin_cos();
                (yi - (np[0] + np[1] * co + np[2] * s)).powi(2)
            })
            .sum();
        if nrss >= rss {
            break;
        }
        p = np;
        k = nk;
        rss = nrss;
    }

    let r = p[1].hypot(p[2]);
    // y = c0 + r cos(k(θ - mid) - ψ) with ψ = atan2(b, a).
    let psi = p[2].atan2(p[1]) + k * mid;
    let mut phase = (-psi - std::f64::consts::PI) / 2.0;
    phase = phase.rem_euclid(std::f64::consts::PI);
    if phase > std::f64::consts::FRAC_PI_2 {
        phase -= std::f64::consts::PI;
    }
    Ok(ThetaFit {
        amplitude: 2.0 * r,
        offset: p[0] - r,
        period: std::f64::consts::TAU / k,
        phase,
        residual: (rss / rows.len() as f64).sqrt(),
    })
}

/// Abscissae of the interior local maxima of `rows` (strict rise, then no
/// further rise).
pub fn local_maxima(rows: &[(f64, f64)]) -> Vec<f64> {
    rows.windows(3)
        .filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1)
        .map(|w| w[1].0)
        .collect()
}

/// 64-bit linear congruential generator with Knuth's MMIX constants,
/// `s <- s · 6364136223846793005 + 1442695040888963407 (mod 2^64)`.
/// Uniform draws use the top 53 bits of the state after each step.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6_364_136_223_846_793_005;
    pub const INCREMENT: u64 = 1_442_695_040_888_963_407;

    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}

/// Adds uniform noise in `±relative · max|g|` to each row.
pub fn add_uniform_noise(rows: &[(f64, f64)], relative: f64, seed: u64) -> Vec<(f64, f64)> {
    let scale = relative * rows.iter().fold(0.0f64, |m, r| m.max(r.1.abs()));
    let mut rng = Lcg::new(seed);
    rows.iter()
        .map(|&(t, g)| (t, g + rng.uniform_in(-scale, scale)))
        .collect()
}
