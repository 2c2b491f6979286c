use thiserror::Error;

/// Errors raised by the construction, conditioning and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("M must be a positive integer")]
    ZeroM,

    #[error("precision of {0} bits is below the 64-bit minimum")]
    Precision(u32),

    #[error("expected {expected} phases (one per parallel), got {got}")]
    PhaseCount { expected: usize, got: usize },

    #[error("phase {phase} for parallel {j} is outside [0, 2pi/{r})")]
    PhaseRange { j: usize, r: u32, phase: f64 },

    #[error("point at infinity: the north pole has no finite stereographic image")]
    PointAtInfinity,

    #[error("multiple root at index {0}: the condition number is infinite")]
    MultipleRoot(usize),

    #[error("factor constant must be nonzero")]
    ZeroConstant,

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("precondition violated in {op}: {detail}")]
    Precondition { op: &'static str, detail: String },

    #[error("hypothesis M >= {required} not met (M = {m})")]
    Hypothesis { m: u32, required: u32 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Precondition {
        op,
        detail: detail.into(),
    }
}
