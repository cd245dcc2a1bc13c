use thiserror::Error;

/// Errors raised by the matrix routines and the verification harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeinzError {
    #[error("dimension mismatch: {context} ({left:?} vs {right:?})")]
    DimensionMismatch {
        context: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eig:e} below -{tol:e}")]
    NotPsd { min_eig: f64, tol: f64 },

    #[error("{algorithm} did not converge after {sweeps} sweeps (residual {residual:e})")]
    Convergence {
        algorithm: &'static str,
        sweeps: usize,
        residual: f64,
    },

    #[error("negative power {power} of a singular matrix (min eigenvalue {min_eig:e})")]
    SingularNegativePower { power: f64, min_eig: f64 },

    #[error("singular matrix in linear solve (pivot {pivot:e})")]
    Singular { pivot: f64 },

    #[error("parameter {name} = {value} outside {range}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("Ky Fan index k = {k} exceeds min(rows, cols) = {max}")]
    KyFanIndex { k: usize, max: usize },

    #[error("invalid monotone function: {0}")]
    InvalidFunction(String),

    #[error("quadrature disagrees with spectral evaluation: relative error {achieved:e} > {tolerance:e}")]
    Quadrature { achieved: f64, tolerance: f64 },

    #[error("bisection bracket ({lo}, {hi}) has no sign change (g = {g_lo:e}, {g_hi:e})")]
    Bracket { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("schema violation: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, HeinzError>;

/// Validates that `value` lies in `[lo, hi]`.
pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64, range: &'static str) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(HeinzError::ParamOutOfRange { name, value, range })
    }
}
