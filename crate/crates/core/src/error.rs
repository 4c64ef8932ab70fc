use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("matrix is not positive (minimum eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension {0} exceeds the cap of {max}", max = crate::linalg::MAX_DIM)]
    DimensionTooLarge(usize),
    #[error("matrix data has {found} entries, expected {expected}")]
    BadShape { expected: usize, found: usize },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("K rho K^dagger is not an i-operator: {0}")]
    ResultNotIOperator(alloc::boxed::Box<Error>),
    #[error("part is not supported inside the whole (residual {residual:e})")]
    SupportViolation { residual: f64 },
    #[error("invalid mixture: {0}")]
    InvalidMixture(String),
    #[error("trajectory needs at least 3 points, got {0}")]
    InsufficientPoints(usize),
    #[error("trajectory times must be strictly increasing and uniformly spaced")]
    NonUniformTimes,
    #[error("invalid condensation structure: {0}")]
    InvalidStructure(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("label `{0}` has zero probability")]
    ZeroProbabilityLabel(String),
    #[error("outcome `{0}` has zero probability")]
    ZeroProbabilityOutcome(String),
    #[error("invalid measurement system: {0}")]
    InvalidMeasurement(String),
    #[error("measurement system is not definitive (completeness residual {residual:e})")]
    NotDefinitive { residual: f64 },
    #[error("operator is not pure (tr rho^2 = {purity})")]
    NotPure { purity: f64 },
    #[error("vector has (near) zero norm")]
    ZeroVector,
    #[error("bad slit geometry: {0}")]
    BadSlitGeometry(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
}
