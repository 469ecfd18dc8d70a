use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mode has zero norm")]
    ZeroNorm,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("mode is not representable in the reference basis (residual {residual:.3e})")]
    OutOfSubspace { residual: f64 },
    #[error("state is not normalized (norm² = {norm_sqr})")]
    Normalization { norm_sqr: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("interferogram baseline is zero")]
    DegenerateBaseline,
    #[error("need at least {needed} rows, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("fit is degenerate: {0}")]
    DegenerateFit(String),
}
