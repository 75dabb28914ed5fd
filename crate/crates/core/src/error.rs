use thiserror::Error;

use crate::arith::Rat;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("duplicate points at indices {0} and {1}")]
    DuplicatePoints(usize, usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inverse of zero")]
    InverseOfZero,

    #[error("zero section")]
    ZeroSection,

    #[error("exact {what} is only available for d <= 2 (got d = {d})")]
    DimensionGuard { d: usize, what: &'static str },

    #[error("matrix too large for the minor oracle: {rows}x{cols}")]
    SizeGuard { rows: usize, cols: usize },

    #[error("precision exhausted: singular values still uncertified at cap {cap}")]
    PrecisionExhausted { cap: Rat },

    #[error("rank deficient: rank {rank} < {cols} columns")]
    RankDeficient { rank: usize, cols: usize },

    #[error("target unreachable at tolerance: residual {residual} after {iterations} iterations")]
    TargetUnreachable { residual: f64, iterations: usize },

    #[error("point {0} is dominated at every shift but has a positive target")]
    DominatedTarget(usize),

    #[error("linear program is {0}")]
    Lp(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// Errors caused by malformed or inconsistent input rather than by a
    /// computation that ran out of room.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Invalid(_)
                | Error::DimensionMismatch { .. }
                | Error::DuplicatePoints(..)
                | Error::Precondition(_)
                | Error::ZeroSection
                | Error::DimensionGuard { .. }
                | Error::SizeGuard { .. }
                | Error::DominatedTarget(_)
                | Error::Json(_)
        )
    }
}
