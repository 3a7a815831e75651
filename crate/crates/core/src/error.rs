use thiserror::Error;

use crate::fixedpoint::HypothesisCheck;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {0} lies outside the domain")]
    PointOutsideDomain(String),
    #[error("coefficient must be a real number >= 1, got {0}")]
    InvalidCoefficient(String),
    #[error("axiom prerequisite failed: {0}")]
    AxiomPrereqFailed(String),
    #[error("unknown catalog id {0:?}")]
    UnknownId(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("radius must be positive, got {0}")]
    NonpositiveRadius(String),
    #[error("point {y} is not in the ball centered at {center}")]
    NotInBall { center: String, y: String },
    #[error("no verified inner radius found: {0}")]
    ContainmentFailed(String),
    #[error("operation requires a finite domain")]
    InfiniteDomain,
    #[error("domain too large for exhaustive enumeration ({0} points, limit {1})")]
    DomainTooLarge(usize, usize),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("hypothesis {} failed", .0.name)]
    HypothesisFailed(Box<HypothesisCheck>),
    #[error("no fixed point certified within {0} iterations")]
    MaxIterExceeded(usize),
    #[error("iterate {0} left the domain")]
    DomainEscape(String),
    #[error("mapping has no inverse")]
    NoInverse,
    #[error("orbit displacement series does not pass the ratio test (ratio {0})")]
    SeriesDiverging(f64),
    #[error("index error: {0}")]
    IndexError(String),
    #[error("lambda {lambda} outside (0, 1/(2s)) = (0, {bound})")]
    LambdaOutOfRange { lambda: f64, bound: f64 },
    #[error("unknown example {0:?}")]
    UnknownExample(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code used in CLI error payloads.
    pub fn code(&self) -> &'static str {
        match self {
            Error::PointOutsideDomain(_) => "PointOutsideDomain",
            Error::InvalidCoefficient(_) => "InvalidCoefficient",
            Error::AxiomPrereqFailed(_) => "AxiomPrereqFailed",
            Error::UnknownId(_) => "UnknownId",
            Error::BadParams(_) => "BadParams",
            Error::NonpositiveRadius(_) => "NonpositiveRadius",
            Error::NotInBall { .. } => "NotInBall",
            Error::ContainmentFailed(_) => "ContainmentFailed",
            Error::InfiniteDomain => "InfiniteDomain",
            Error::DomainTooLarge(..) => "DomainTooLarge",
            Error::HypothesisNotMet(_) => "HypothesisNotMet",
            Error::HypothesisFailed(_) => "HypothesisFailed",
            Error::MaxIterExceeded(_) => "MaxIterExceeded",
            Error::DomainEscape(_) => "DomainEscape",
            Error::NoInverse => "NoInverse",
            Error::SeriesDiverging(_) => "SeriesDiverging",
            Error::IndexError(_) => "IndexError",
            Error::LambdaOutOfRange { .. } => "LambdaOutOfRange",
            Error::UnknownExample(_) => "UnknownExample",
            Error::Parse(_) => "ParseError",
            Error::Io(_) => "IoError",
            Error::Json(_) => "JsonError",
        }
    }
}
