use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("finite-difference step too large: Richardson estimate {estimate:e} exceeds tolerance {tol:e}")]
    StepTooLarge { estimate: f64, tol: f64 },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("critical point: |g'| = {0:e}")]
    CriticalPoint(f64),
    #[error("evaluation at or within guard distance of the pole q = {0}")]
    PoleEvaluation(f64),
    #[error("symmetry violation: {0}")]
    SymmetryViolation(String),
    #[error("range violation: 1 + K|g|^2 = {value:e} at z = {z}")]
    RangeViolation { value: f64, z: String },
    #[error("Möbius normalization failure: {0}")]
    NormalizationFailure(String),
    #[error("path passes within {distance:e} of the pole {pole} (margin {margin:e})")]
    PoleProximity { pole: f64, distance: f64, margin: f64 },
    #[error("ODE step underflow at z = {0}")]
    StepUnderflow(String),
    #[error("quadrature stalled on [{lo}, {hi}] at error estimate {error:e}")]
    QuadratureStalled { lo: f64, hi: f64, error: f64 },
    #[error("degenerate circle fit: {0}")]
    DegenerateFit(String),
    #[error("grid too coarse: Richardson disagreement {disagreement:e} exceeds residual {residual:e}")]
    GridTooCoarse { disagreement: f64, residual: f64 },
    #[error("interval endpoint within margin {margin:e} of singular point {point}")]
    MarginViolation { point: f64, margin: f64 },
    #[error("circle fit failure: {0}")]
    FitFailure(String),
    #[error("vertex limit did not converge at {0}")]
    VertexLimitNonconvergent(String),
    #[error("objective does not change sign on the admissible interval [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("unsupported variant: {0}")]
    UnsupportedVariant(String),
    #[error("io: {0}")]
    Io(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
