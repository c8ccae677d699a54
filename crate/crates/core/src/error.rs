use thiserror::Error;

/// Errors raised by the numerical and geometric routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gamma pole at non-positive integer {0}")]
    GammaPole(f64),

    #[error("argument {value} outside the domain of {function}")]
    Domain { function: &'static str, value: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("singular density at w = 0 for a negative exponent")]
    SingularPoint,

    #[error("quadrature tolerance not met: estimate {estimate:e}, error {error:e}, tolerance {tolerance:e}")]
    ToleranceNotMet {
        estimate: f64,
        error: f64,
        tolerance: f64,
    },

    #[error("Re z = {re_z} outside the admissible strip [{lo}, {hi}]")]
    StripViolation { re_z: f64, lo: f64, hi: f64 },

    #[error("bound not available in this parameter regime: {0}")]
    OutsideBoundRegime(String),

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
