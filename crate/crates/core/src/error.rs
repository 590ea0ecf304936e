use thiserror::Error;

/// Errors raised by the laboratory operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error(
        "invariant violated: {what} at index {index} (value {value:.3e}, tolerance {tol:.3e})"
    )]
    Invariant {
        what: &'static str,
        index: usize,
        value: f64,
        tol: f64,
    },

    #[error("incompatible inputs: {0}")]
    Mismatch(String),

    #[error("not integrable: {tail} tail has exponent slope {slope:.6} (must be {requirement})")]
    NotIntegrable {
        tail: &'static str,
        slope: f64,
        requirement: &'static str,
    },

    #[error("barrier constant {a} is smaller than the endpoint distance {needed}")]
    BarrierTooSmall { a: f64, needed: f64 },

    #[error("inadmissible input: {0}")]
    Inadmissible(String),

    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("F-trace is not convex (worst second difference {worst:.3e} at index {index})")]
    FTraceNonConvex { worst: f64, index: usize },

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("quadrature did not converge: relative change {change:.3e} after doubling")]
    Quadrature { change: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, LabError>;
