use alloc::string::String;
use core::fmt;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// A parameter failed basic validation (non-positive `L`, negative
    /// `delta`, empty schedule, ...).
    InvalidParameter(String),
    /// A step length lies outside the interval required by the requested
    /// operation. `step * lipschitz` is the scale-free quantity checked.
    Regime {
        /// Human-readable admissible interval in units of `1/L`.
        interval: &'static str,
        /// The offending step length.
        step: f64,
        /// The Lipschitz constant it was checked against.
        lipschitz: f64,
    },
    /// Two vectors that must share a dimension do not.
    DimensionMismatch { left: usize, right: usize },
    /// A triple set violates the smooth interpolation conditions; `(i, j)`
    /// is the worst ordered pair (1-based) and `residual` its value.
    NotInterpolable { i: usize, j: usize, residual: f64 },
    /// A matrix expected to be positive semidefinite is not.
    NotPsd { min_eigenvalue: f64 },
    /// An iterate index outside `1..=len`.
    IndexOutOfRange { index: usize, len: usize },
    /// A user-supplied oracle reported failure.
    Oracle(String),
    /// The SDP machinery hit a problem outside normal status reporting.
    Solver(String),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            CoreError::Regime {
                interval,
                step,
                lipschitz,
            } => write!(
                f,
                "step length {step} with L = {lipschitz} lies outside the required interval {interval}"
            ),
            CoreError::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            CoreError::NotInterpolable { i, j, residual } => write!(
                f,
                "triples are not interpolable by a smooth function: pair ({i}, {j}) has residual {residual}"
            ),
            CoreError::NotPsd { min_eigenvalue } => write!(
                f,
                "matrix is not positive semidefinite (min eigenvalue {min_eigenvalue})"
            ),
            CoreError::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range 1..={len}")
            }
            CoreError::Oracle(msg) => write!(f, "oracle failure: {msg}"),
            CoreError::Solver(msg) => write!(f, "solver failure: {msg}"),
        }
    }
}

impl core::error::Error for CoreError {}
