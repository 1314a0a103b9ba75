use thiserror::Error;

/// Errors raised by measure, distance and geodesic computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("measure has zero total mass")]
    ZeroMass,

    #[error("incompatible supports: {0}")]
    IncompatibleSupport(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("alpha = {0} outside [0, 1]")]
    AlphaOutOfRange(f64),

    #[error("curve parameter s = {0} outside [0, 1]")]
    SOutOfRange(f64),

    #[error("angle undefined: a geodesic of zero length emanates from the vertex")]
    DegenerateAngle,

    #[error("numerical inconsistency in {what}: value {value}")]
    NumericalInconsistency { what: &'static str, value: f64 },

    #[error("not a probability measure (mass = {mass})")]
    NotProbability { mass: f64 },

    #[error("degenerate geodesic: {0}")]
    DegenerateGeodesic(&'static str),

    #[error("exponent {0} must be > 3")]
    ExponentTooSmall(f64),

    #[error("invalid sampled curve: {0}")]
    InvalidCurve(String),

    #[error("parameter outside the family domain: {0}")]
    StepOutOfDomain(String),

    #[error("no convergence after {iterations} iterations: {detail}")]
    NoConvergence { iterations: usize, detail: String },

    #[error("parameters must be strictly positive")]
    NonPositiveParam,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric positive definite")]
    NotSpd,

    #[error("precondition violated: {0}")]
    ConditionViolated(String),

    #[error("metric quadrature diverges under refinement (coarse {coarse}, fine {fine})")]
    UnboundedMetric { coarse: f64, fine: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Boundary slack below which square-root and arc-cosine arguments are clamped.
pub(crate) const CLAMP_SLACK: f64 = 1e-9;

/// `sqrt(x)` with rounding noise below zero clamped; `scale` is the natural size of `x`.
pub(crate) fn clamped_sqrt(x: f64, scale: f64, what: &'static str) -> Result<f64> {
    if x >= 0.0 {
        Ok(x.sqrt())
    } else if x >= -CLAMP_SLACK * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::NumericalInconsistency { what, value: x })
    }
}

pub(crate) fn clamped_acos(x: f64, what: &'static str) -> Result<f64> {
    if x.abs() <= 1.0 {
        Ok(x.acos())
    } else if x.abs() <= 1.0 + CLAMP_SLACK {
        Ok(x.clamp(-1.0, 1.0).acos())
    } else {
        Err(Error::NumericalInconsistency { what, value: x })
    }
}
