use thiserror::Error;

use crate::C64;

/// Errors raised by the evaluators and verification routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {0} lies outside the domain of {1}")]
    OutsideDomain(C64, String),

    #[error("point {0} is a singular point of {1}")]
    SingularPoint(C64, String),

    #[error("finite-difference stencil around {0} leaves the domain")]
    StencilOutsideDomain(C64),

    #[error("density is not positive on the stencil around {0}")]
    NonpositiveDensity(C64),

    #[error("deck translation minimum attained at the winding bound {0}")]
    WindingBoundTooSmall(i64),

    #[error("no point in the sample has a positive deficit")]
    DegenerateSample,

    #[error("need at least {needed} usable points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("numeric overflow: w = {0} exceeds the blow-up guard")]
    NumericOverflow(f64),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("radial grid must extend to t <= {required}, but starts at {start}")]
    GridTooShort { required: f64, start: f64 },

    #[error("metric has a conical singularity, expected a logarithmic one")]
    WrongSingularityOrder,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
