//! Crate-wide error type.

use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by grid construction, parsing, solvers and pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid resolution {0} is invalid: need a power of two >= 16")]
    BadResolution(usize),

    #[error("grid half-width must be positive, got {0}")]
    BadHalfWidth(f64),

    #[error("non-finite value {value} sampled at node ({x}, {y})")]
    NonFiniteSample { value: String, x: f64, y: f64 },

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("mask is empty")]
    EmptyMask,

    #[error("mask eroded to empty")]
    ErodedEmpty,

    #[error("parse error at byte {offset}: {message} (expected {expected})")]
    Parse {
        offset: usize,
        message: String,
        expected: String,
    },

    #[error("division by zero at z = {0}")]
    DivisionByZero(Complex64),

    #[error("evaluation overflowed to a non-finite value at z = {0}")]
    EvalOverflow(Complex64),

    #[error("expression has wrong shape: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("linear solve did not converge after {iterations} iterations (residual {residual:.3e}, target {target:.3e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        target: f64,
    },

    #[error("extension failure: {0}")]
    ExtensionFailure(String),

    #[error("cutoff gap too thin: need at least {needed} cells between inner and outer masks, got {got}")]
    CutoffGapTooThin { needed: usize, got: usize },

    #[error("tubular neighborhood too thin: radius {radius:.3e} is below 3 grid cells ({limit:.3e}); refine the grid")]
    TubeTooThin { radius: f64, limit: f64 },

    #[error("support violation: function is nonzero on the {0}-cell boundary collar")]
    SupportViolation(usize),

    #[error("pipeline stage '{stage}' missed its budget: best error {best:.3e}, target {target:.3e}")]
    StageFailure {
        stage: String,
        best: f64,
        target: f64,
    },

    #[error("admissibility validation failed: {0}")]
    NotAdmissible(String),

    #[error("config error at '{path}': {message}")]
    Config { path: String, message: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
