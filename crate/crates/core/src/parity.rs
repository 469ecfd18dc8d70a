//! Sampled 1D transverse modes, their even/odd decomposition and the map
//! from modes in the reference subspace onto two-level parity qubits.
//!
//! Modes live on a symmetric midpoint grid with no sample at `x = 0`, so the
//! reflection `x -> -x` is an exact index reversal and the sign of `x` is
//! never ambiguous.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Residual above which a mode is rejected by [`qubit_extract`].
pub const SUBSPACE_TOLERANCE: f64 = 1e-6;

/// Tolerance on `|α_e|² + |α_o|²` accepted by [`ParityQubit::new`].
pub const QUBIT_NORM_TOLERANCE: f64 = 1e-12;

/// Symmetric transverse sampling grid, `x_k = -L/2 + (k + 1/2) L / N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    half_width: f64,
}

impl Default for Grid {
    /// 512 samples over 16 beam-waist units.
    fn default() -> Self {
        Self {
            n: 512,
            half_width: 8.0,
        }
    }
}

impl Grid {
    pub fn new(n: usize, half_width: f64) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::Shape(format!(
                "sample count must be even and positive, got {n}"
            )));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::Domain(format!(
                "half width must be positive and finite, got {half_width}"
            )));
        }
        Ok(Self { n, half_width })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Sample spacing `L / N`.
    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Position of sample `k`. Written as an odd integer times `L / 2N` so
    /// that `x(N-1-k) == -x(k)` holds bit for bit.
    pub fn x(&self, k: usize) -> f64 {
        let odd = 2 * k as i64 + 1 - self.n as i64;
        odd as f64 * (self.half_width / self.n as f64)
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.x(k)).collect()
    }

    /// Index of the mirror sample `-x_k`.
    pub fn mirror(&self, k: usize) -> usize {
        self.n - 1 - k
    }
}

/// A complex transverse amplitude `ψ(x_k)` sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialMode {
    grid: Grid,
    amplitudes: Vec<Complex64>,
}

impl SpatialMode {
    /// Builds a normalized mode from raw samples.
    pub fn new(values: Vec<Complex64>, grid: Grid) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        let raw = Self::from_raw(grid, values);
        let norm = raw.norm_sqr().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::ZeroNorm);
        }
        Ok(raw.scaled(1.0 / norm))
    }

    /// Samples `f` on the grid and normalizes the result.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid.positions().into_iter().map(f).collect(), grid)
    }

    /// Wraps samples without normalizing. Unitary operations use this so the
    /// norm they carry is exactly the one they were handed.
    pub(crate) fn from_raw(grid: Grid, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(grid.len(), amplitudes.len());
        Self { grid, amplitudes }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Midpoint-rule `∫|ψ|² dx`.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub(crate) fn scaled(&self, s: f64) -> Self {
        Self::from_raw(self.grid, self.amplitudes.iter().map(|a| a * s).collect())
    }

    /// Pointwise map `ψ(x_k) -> f(x_k, ψ(x_k))`, no renormalization.
    pub(crate) fn map_samples(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(k, &a)| f(self.grid.x(k), a))
            .collect();
        Self::from_raw(self.grid, amplitudes)
    }

    /// `ψ(x) -> ψ(-x)` by index reversal.
    pub(crate) fn reflected(&self) -> Self {
        let mut amplitudes = self.amplitudes.clone();
        amplitudes.reverse();
        Self::from_raw(self.grid, amplitudes)
    }

    /// Largest pointwise deviation from `other`, used for approximate equality.
    pub fn max_abs_diff(&self, other: &SpatialMode) -> Result<f64> {
        check_same_grid(self, other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Normalized mode from raw samples; see [`SpatialMode::new`].
pub fn make_mode(values: Vec<Complex64>, grid: Grid) -> Result<SpatialMode> {
    SpatialMode::new(values, grid)
}

fn check_same_grid(a: &SpatialMode, b: &SpatialMode) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::Shape(format!(
            "grid mismatch: {:?} vs {:?}",
            a.grid, b.grid
        )));
    }
    Ok(())
}

/// Midpoint-rule inner product `⟨a|b⟩ = ∫ a*(x) b(x) dx`.
pub fn overlap(a: &SpatialMode, b: &SpatialMode) -> Result<Complex64> {
    check_same_grid(a, b)?;
    let sum: Complex64 = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(sum * a.grid.dx())
}

/// Even and odd parts of a mode together with their populations.
///
/// The parts are not normalized; `even + odd` reproduces the input samples.
#[derive(Debug, Clone)]
pub struct ParityDecomposition {
    pub even: Vec<Complex64>,
    pub odd: Vec<Complex64>,
    pub p_even: f64,
    pub p_odd: f64,
}

pub fn parity_decompose(m: &SpatialMode) -> ParityDecomposition {
    let n = m.grid.len();
    let a = &m.amplitudes;
    let mut even = Vec::with_capacity(n);
    let mut odd = Vec::with_capacity(n);
    for k in 0..n {
        let mirror = a[m.grid.mirror(k)];
        even.push((a[k] + mirror) * 0.5);
        odd.push((a[k] - mirror) * 0.5);
    }
    let dx = m.grid.dx();
    let p_even = even.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx;
    let p_odd = odd.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx;
    ParityDecomposition {
        even,
        odd,
        p_even,
        p_odd,
    }
}

/// Label of a parity basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Even, Parity::Odd];

    /// Position in the ordered basis `(|e⟩, |o⟩)`.
    pub fn index(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    /// Eigenvalue under reflection: `+1` even, `-1` odd.
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// Normalized amplitude pair over the ordered basis `(|e⟩, |o⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityQubit {
    alpha_e: Complex64,
    alpha_o: Complex64,
}

impl ParityQubit {
    pub const EVEN: ParityQubit = ParityQubit {
        alpha_e: Complex64::new(1.0, 0.0),
        alpha_o: Complex64::new(0.0, 0.0),
    };
    pub const ODD: ParityQubit = ParityQubit {
        alpha_e: Complex64::new(0.0, 0.0),
        alpha_o: Complex64::new(1.0, 0.0),
    };

    /// Accepts an already normalized pair.
    pub fn new(alpha_e: Complex64, alpha_o: Complex64) -> Result<Self> {
        let norm_sqr = alpha_e.norm_sqr() + alpha_o.norm_sqr();
        if (norm_sqr - 1.0).abs() > QUBIT_NORM_TOLERANCE {
            return Err(Error::Normalization { norm_sqr });
        }
        Ok(Self { alpha_e, alpha_o })
    }

    /// Rescales an arbitrary nonzero pair onto the unit sphere.
    pub fn normalized(alpha_e: Complex64, alpha_o: Complex64) -> Result<Self> {
        let norm = (alpha_e.norm_sqr() + alpha_o.norm_sqr()).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            alpha_e: alpha_e / norm,
            alpha_o: alpha_o / norm,
        })
    }

    pub fn alpha_e(&self) -> Complex64 {
        self.alpha_e
    }

    pub fn alpha_o(&self) -> Complex64 {
        self.alpha_o
    }

    pub fn norm_sqr(&self) -> f64 {
        self.alpha_e.norm_sqr() + self.alpha_o.norm_sqr()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &ParityQubit) -> Complex64 {
        self.alpha_e.conj() * other.alpha_e + self.alpha_o.conj() * other.alpha_o
    }

    /// Multiplies both amplitudes by `e^{iγ}`.
    pub fn with_global_phase(&self, gamma: f64) -> Self {
        let p = Complex64::from_polar(1.0, gamma);
        Self {
            alpha_e: self.alpha_e * p,
            alpha_o: self.alpha_o * p,
        }
    }

    /// Largest componentwise distance after aligning the global phase of
    /// `other` onto `self`. Zero iff both describe the same ray.
    pub fn ray_distance(&self, other: &ParityQubit) -> f64 {
        let ov = other.inner(self);
        let phase = if ov.norm() > 0.0 {
            ov / ov.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let de = (self.alpha_e - phase * other.alpha_e).norm();
        let d_o = (self.alpha_o - phase * other.alpha_o).norm();
        de.max(d_o)
    }

    /// Largest componentwise distance with no phase alignment.
    pub fn component_distance(&self, other: &ParityQubit) -> f64 {
        (self.alpha_e - other.alpha_e)
            .norm()
            .max((self.alpha_o - other.alpha_o).norm())
    }
}

/// Point on the Poincaré sphere; `|e⟩` sits at the north pole `s3 = +1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesVector {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl StokesVector {
    pub fn norm(&self) -> f64 {
        (self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3).sqrt()
    }
}

pub fn poincare_coords(q: &ParityQubit) -> StokesVector {
    let cross = q.alpha_e.conj() * q.alpha_o;
    StokesVector {
        s1: 2.0 * cross.re,
        s2: 2.0 * cross.im,
        s3: q.alpha_e.norm_sqr() - q.alpha_o.norm_sqr(),
    }
}

/// The pair `{g, g·sgn(x)}` spanning the two-dimensional subspace that the
/// half-plane phase plates and the reflection leave invariant.
#[derive(Debug, Clone)]
pub struct ReferenceBasis {
    even: SpatialMode,
    odd: SpatialMode,
}

impl ReferenceBasis {
    /// Gaussian `exp(-x²)` and its sign-flipped partner.
    pub fn gaussian(grid: Grid) -> Self {
        let even = SpatialMode::from_fn(grid, |x| Complex64::new((-x * x).exp(), 0.0))
            .expect("gaussian has nonzero norm on any grid");
        Self::from_even_unchecked(even)
    }

    /// Builds the basis from any even mode.
    pub fn from_even(even: SpatialMode) -> Result<Self> {
        let parts = parity_decompose(&even);
        if parts.p_odd > 1e-20 {
            return Err(Error::Domain(format!(
                "reference mode is not even (odd population {:.3e})",
                parts.p_odd
            )));
        }
        Ok(Self::from_even_unchecked(even))
    }

    fn from_even_unchecked(even: SpatialMode) -> Self {
        let odd = even.map_samples(|x, a| if x > 0.0 { a } else { -a });
        Self { even, odd }
    }

    pub fn grid(&self) -> &Grid {
        self.even.grid()
    }

    /// `g`.
    pub fn even(&self) -> &SpatialMode {
        &self.even
    }

    /// `chi = g·sgn(x)`.
    pub fn odd(&self) -> &SpatialMode {
        &self.odd
    }

    /// `α_e g + α_o chi`.
    pub fn mode_for(&self, q: &ParityQubit) -> SpatialMode {
        let amplitudes = self
            .even
            .amplitudes
            .iter()
            .zip(&self.odd.amplitudes)
            .map(|(g, chi)| q.alpha_e * g + q.alpha_o * chi)
            .collect();
        SpatialMode::from_raw(*self.grid(), amplitudes)
    }
}

/// Projects a mode onto the reference basis, `α_e = ⟨g|m⟩`, `α_o = ⟨chi|m⟩`.
pub fn qubit_extract(m: &SpatialMode, basis: &ReferenceBasis) -> Result<ParityQubit> {
    let alpha_e = overlap(&basis.even, m)?;
    let alpha_o = overlap(&basis.odd, m)?;
    let residual_sqr: f64 = m
        .amplitudes
        .iter()
        .zip(basis.even.amplitudes.iter().zip(&basis.odd.amplitudes))
        .map(|(a, (g, chi))| (a - alpha_e * g - alpha_o * chi).norm_sqr())
        .sum::<f64>()
        * m.grid.dx();
    let residual = residual_sqr.sqrt();
    if residual > SUBSPACE_TOLERANCE {
        return Err(Error::OutOfSubspace { residual });
    }
    ParityQubit::normalized(alpha_e, alpha_o)
}
