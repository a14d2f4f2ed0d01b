use thiserror::Error;

use crate::instance::OutcomeViolation;
use crate::metric::PointId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("metric undefined: {0}")]
    MetricUndefined(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("point id {id} out of range (space has {len} points)")]
    InvalidPoint { id: PointId, len: usize },

    #[error("insufficient targets: asked for the {q}-th closest of {available}")]
    InsufficientTargets { q: usize, available: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid outcome: {0:?}")]
    InvalidOutcome(Vec<OutcomeViolation>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("instance too large for exhaustive enumeration: {0}")]
    SizeGuard(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MetricUndefined(_) => "metric_undefined",
            Error::InvalidMetric(_) => "invalid_metric",
            Error::InvalidPoint { .. } => "invalid_point",
            Error::InsufficientTargets { .. } => "insufficient_targets",
            Error::InvalidInstance(_) => "invalid_instance",
            Error::InvalidOutcome(_) => "invalid_outcome",
            Error::Precondition(_) => "precondition",
            Error::SizeGuard(_) => "size_guard",
            Error::Overflow(_) => "overflow",
            Error::Parse(_) => "parse",
        }
    }
}
