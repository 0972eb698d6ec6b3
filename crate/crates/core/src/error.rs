use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("invalid curvature table: symmetry defect {defect:e} exceeds tolerance {tolerance:e}")]
    InvalidCurvature { defect: f64, tolerance: f64 },

    #[error("geodesic shooting did not converge (miss {miss:e} after {iterations} iterations)")]
    GeodesicFailure { miss: f64, iterations: usize },

    #[error("value {value} outside admissible range [0, {sup})")]
    Admissibility { value: f64, sup: f64 },

    #[error("hot approximation failed its audit (best sup-error {best_error:e}, min slack {min_slack:e})")]
    ApproximationFailure { best_error: f64, min_slack: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("numerical failure in {stage}: residual {residual:e}")]
    Numerical { stage: String, residual: f64 },

    #[error("probe failed: {0}")]
    Probe(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate curvature: all κ_i vanish, so the λ-quadratic has no positive region")]
    DegenerateCurvature,

    #[error("construction failed: {0}")]
    ConstructionFailure(String),

    #[error("closed-form and numeric c3 disagree: numeric {numeric}, closed form {closed_form}")]
    GeometryBug { numeric: f64, closed_form: f64 },

    #[error("no violation found in scan ({0})")]
    SearchFailure(String),

    #[error("invariant breach: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
