//! Photonic qubits carried by the spatial parity of a one-dimensional
//! transverse mode.
//!
//! * [`parity`]: sampled modes, even/odd decomposition and the mode to qubit map.
//! * [`elements`]: parity flipper, spatial flipper and parity rotator, both as
//!   continuous operators and as 2×2 matrices.
//! * [`spdc`]: pump parity to biphoton parity, Bell states, concurrence and
//!   the filter-limited spectrum.
//! * [`interferometer`]: coincidence interferograms of the traditional and
//!   parity-sensitive Mach–Zehnder interferometers.
//! * [`fit`]: plate-phase sweep fitting and seeded noise.

pub mod elements;
pub mod error;
pub mod fit;
pub mod interferometer;
pub mod parity;
pub mod quadrature;
pub mod spdc;

pub use elements::{
    apply_pf, apply_pr, apply_sequence, apply_sf, element_matrix, Element, ElementMatrix,
};
pub use error::{Error, Result};
pub use interferometer::{
    coincidence_rate, interferogram_sweep, port_transfer, theta_sweep, visibility, Interferogram,
    Interferometer, InterferometerConfig, Port,
};
pub use parity::{
    make_mode, overlap, parity_decompose, poincare_coords, qubit_extract, Grid, Parity,
    ParityQubit, ReferenceBasis, SpatialMode, StokesVector,
};
pub use spdc::{
    bell_state, concurrence, make_spectrum, pump_to_biphoton, BellState, SpectralAmplitude,
    TwoPhotonParityState,
};
