use thiserror::Error;

use crate::reduction::RegularityReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rational {0:?}")]
    ParseRational(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("conormal {0:?} is zero or not primitive")]
    NonPrimitiveConormal(Vec<i64>),

    #[error("polytope is unbounded (recession direction {0:?})")]
    UnboundedPolytope(Vec<String>),

    #[error("polytope is empty")]
    EmptyPolytope,

    #[error("polytope is not full-dimensional")]
    NotFullDimensional,

    #[error("facet {0} is redundant")]
    RedundantFacet(usize),

    #[error("parameter {param} out of range: requires {constraint}")]
    ParameterOutOfRange { param: String, constraint: String },

    #[error("point violates facet {facet}")]
    PointOutside { facet: usize },

    #[error("point is not in the interior")]
    PointNotInterior,

    #[error("invalid probe: {0}")]
    InvalidProbe(String),

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("numeric valuation estimate is ill-conditioned: {0}")]
    IllConditioned(String),

    #[error("invalid subtorus slice: {0}")]
    InvalidSlice(String),

    #[error("the slice does not meet the polytope")]
    EmptySlice,

    #[error("level is not regular ({} offending faces)", .0.offending_faces.len())]
    IrregularLevel(Box<RegularityReport>),

    #[error("reduced polytope does not match the expected polytope")]
    MismatchedReduction,

    #[error("{0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn out_of_range(param: &str, constraint: impl Into<String>) -> Self {
        Error::ParameterOutOfRange {
            param: param.to_string(),
            constraint: constraint.into(),
        }
    }
}
