use thiserror::Error;

/// Errors raised by the slice regular toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by a quaternion of modulus {0:e}")]
    ZeroDivision(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series is not *-invertible: |a_0| = {0:e}")]
    NotInvertible(f64),

    #[error("range violation: sampled sup |phi| = {sup} is not below the outer radius {radius}")]
    RangeViolation { sup: f64, radius: f64 },

    #[error("the map does not preserve any slice")]
    NotSlicePreserving,

    #[error("the map is not a self-map of the unit ball: sampled sup |f| = {0}")]
    NotSelfMap(f64),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("unsupported map: {0}")]
    UnsupportedMap(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
