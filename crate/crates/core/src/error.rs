use thiserror::Error;

/// Errors raised by the s-map calculus.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("entry count {found} does not match shape {rows}x{cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        found: usize,
    },

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("not Hermitian (max |M - M*| = {0:e})")]
    NotHermitian(f64),

    #[error("not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("trace must be positive (got {0:e})")]
    InvalidTrace(f64),

    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("expected {expected} tensor factors, found {found}")]
    FactorCount { expected: usize, found: usize },

    #[error("factor dimensions must be >= 1")]
    EmptyFactor,

    #[error("basis is not orthonormal (max Gram deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("not an orthogonal projector (residual {0:e})")]
    NotProjector(f64),

    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("probability out of range: {0}")]
    ProbabilityOutOfRange(f64),

    #[error("negative probability entry: {0}")]
    NegativeProbability(f64),

    #[error("not completely entangled (smallest singular value {0:e})")]
    NotCompletelyEntangled(f64),

    #[error("support mismatch (residual {0:e})")]
    SupportMismatch(f64),

    #[error("reference vector is not maximally entangled (Schmidt spread {0:e})")]
    NotMaximallyEntangled(f64),

    #[error("projected vector does not factorize (residual {0:e})")]
    FactorizationResidual(f64),

    #[error("identity check failed: {name} residual {residual:e} exceeds {tol:e}")]
    IdentityViolated {
        name: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
