use thiserror::Error;

use crate::bidisk::RecoveryResult;

/// Failures raised by the geometry kernel and the solvers built on it.
#[derive(Debug, Error)]
pub enum GeomError {
    #[error("points coincide (distance {distance:e} below {tolerance:e})")]
    DegeneratePair { distance: f64, tolerance: f64 },

    #[error("vector is not a valid point of H2: {reason}")]
    InvalidPoint { reason: String },

    #[error("no sign change of the level function within |s| <= {limit} (t = {t}, k = {k})")]
    BracketFailure { t: f64, k: f64, limit: f64 },

    #[error("bisector is not generic: the pairs share a coordinate in factor {factor}")]
    NonGenericBisector { factor: usize },

    #[error("need at least {required} samples, got {got}")]
    TooFewSamples { required: usize, got: usize },

    #[error("samples span too small a region (spread {spread:e})")]
    DegenerateSamples { spread: f64 },

    #[error("no restart reached the objective tolerance (best {:e} after {} restarts)", .best.objective, .best.restarts_used)]
    NoConvergence { best: Box<RecoveryResult> },

    #[error("point lies on the zero level of the denominator pair (level {level:e})")]
    OnForbiddenLocus { level: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
