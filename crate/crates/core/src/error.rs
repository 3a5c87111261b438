use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("(0:0) is not a point of the projective line")]
    ZeroPoint,

    #[error("no factor of {value} found within the configured work limit")]
    WorkLimitExceeded { value: String },

    #[error("membership test requires nonzero coordinates")]
    ZeroCoordinate,

    #[error("{point} is not a point of the Belyi stack {signature} over {ring}")]
    NotAStackPoint {
        point: String,
        signature: String,
        ring: String,
    },

    #[error("solution maps to the indeterminate pair (0:0)")]
    DegeneratePoint,

    #[error("the twist with d = 0 is singular")]
    SingularCurve,

    #[error("sieve output {sieve} disagrees with enumeration {enumerated}")]
    PipelineMismatch { sieve: String, enumerated: String },

    #[error("invalid signature ({0}): every exponent must be at least 2")]
    InvalidSignature(String),

    #[error("equation coefficients must be nonzero")]
    ZeroCoefficient,

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("{0} is not a point on the curve")]
    NotOnCurve(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable snake_case tag for diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroPoint => "zero_point",
            Error::WorkLimitExceeded { .. } => "work_limit_exceeded",
            Error::ZeroCoordinate => "zero_coordinate",
            Error::NotAStackPoint { .. } => "not_a_stack_point",
            Error::DegeneratePoint => "degenerate_point",
            Error::SingularCurve => "singular_curve",
            Error::PipelineMismatch { .. } => "pipeline_mismatch",
            Error::InvalidSignature(_) => "invalid_signature",
            Error::ZeroCoefficient => "zero_coefficient",
            Error::NotPrime(_) => "not_prime",
            Error::NotOnCurve(_) => "not_on_curve",
            Error::InvalidInput(_) => "invalid_input",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
