use thiserror::Error;

/// Errors produced by tensor algebra, solvers, generators, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: left is {left}, right is {right}")]
    DimensionMismatch {
        op: &'static str,
        left: String,
        right: String,
    },

    #[error("invalid argument for {op}: {msg}")]
    InvalidArgument { op: &'static str, msg: String },

    #[error("non-finite value at flat index {index} while constructing tensor")]
    NonFinite { index: usize },

    #[error("parse error at byte offset {offset}: {msg}")]
    Parse { offset: u64, msg: String },

    #[error("numerical breakdown in {op}: {msg}")]
    NumericalBreakdown { op: &'static str, msg: String },

    #[error("{op} refuses this input: {msg}")]
    Unsupported { op: &'static str, msg: String },

    #[error("dense analysis cap exceeded: {what} = {got}, cap = {cap}")]
    SizeCap {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    #[error("inconsistent system: relative residual {residual:.3e} exceeds {tol:.3e}")]
    InconsistentSystem { residual: f64, tol: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(op: &'static str, left: impl std::fmt::Display, right: impl std::fmt::Display) -> Self {
        Error::DimensionMismatch {
            op,
            left: left.to_string(),
            right: right.to_string(),
        }
    }
}
