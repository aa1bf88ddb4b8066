use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input violates a documented precondition.
    Invalid,
    /// The answer exists but cannot be certified at the working precision.
    Precision,
    /// A mathematical obstruction: no object with the requested property.
    Math,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),

    #[error("precision exhausted in {context}: need {needed}, have {available}")]
    PrecisionExhausted {
        context: String,
        needed: String,
        available: String,
    },

    #[error("division by an element that is zero at precision {0}")]
    DivisionByZero(i64),

    #[error("threshold undecidable at working precision; certified upper bound on log-radius {upper}")]
    ThresholdUndecidable { upper: String },

    #[error("pole collision: {0}")]
    PoleCollision(String),

    #[error("ill-conditioned at precision {prec}: pivot valuation {pivot_val} not determined (error valuation {err_val})")]
    IllConditioned {
        prec: i64,
        pivot_val: String,
        err_val: String,
    },

    #[error("tail not certifiable: {0}")]
    TailNotCertified(String),

    #[error("germ is constant at certified degree {0}")]
    ConstantGerm(usize),

    #[error("no order k with k+1 not a power of {p} in window [0, {nmax}]")]
    NoNonPowerOrder { p: u64, nmax: usize },

    #[error("ladder did not stabilize within nmax = {nmax}: increments {increments:?}")]
    NotStabilized { nmax: u32, increments: Vec<i64> },

    #[error("current violates the edge relation at j = {0}")]
    CurrentViolation(i64),

    #[error("points not separated anywhere in the tower")]
    NotSeparated,

    #[error("retraction compatibility fails at sample {index}: {detail}")]
    CompositionFailure { index: usize, detail: String },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Invalid(_) | Error::PrimeMismatch(..) | Error::CurrentViolation(_) => {
                ErrorKind::Invalid
            }
            Error::PrecisionExhausted { .. }
            | Error::DivisionByZero(_)
            | Error::ThresholdUndecidable { .. }
            | Error::IllConditioned { .. }
            | Error::TailNotCertified(_) => ErrorKind::Precision,
            Error::PoleCollision(_)
            | Error::ConstantGerm(_)
            | Error::NoNonPowerOrder { .. }
            | Error::NotStabilized { .. }
            | Error::NotSeparated
            | Error::CompositionFailure { .. } => ErrorKind::Math,
        }
    }

    pub(crate) fn precision(context: impl Into<String>, needed: impl ToString, available: impl ToString) -> Self {
        Error::PrecisionExhausted {
            context: context.into(),
            needed: needed.to_string(),
            available: available.to_string(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
