use thiserror::Error;

use crate::dsl::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the event, action and process algebras and their formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("temporal shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("unsupported temporal shape: {0}")]
    UnsupportedShape(String),
    #[error("event has no temporal coordinate: {0}")]
    MissingTime(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("extent of an empty action is undefined")]
    UndefinedExtent,
    #[error("ratio over an empty action is undefined")]
    UndefinedRatio,
    #[error("unresolved reference: {0}")]
    Resolution(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("undefined composition: {0}")]
    UndefinedComposition(String),
    #[error("undefined shift: {0}")]
    UndefinedShift(String),
    #[error("shift does not map the first tag onto the second: {0}")]
    ShiftMismatch(String),
    #[error("undefined renaming: {0}")]
    UndefinedRenaming(String),
    #[error("state link mismatch: {0}")]
    Link(String),
    #[error("time ordering violated: {0}")]
    Ordering(String),
    #[error("pairing does not cover: {0}")]
    Coverage(String),
    #[error("operand is not contained in the universe: {0}")]
    Universe(String),
    #[error("observable events collide at time {0}; trace order is ambiguous")]
    AmbiguousTrace(String),
    #[error("capacity exceeded: {what} (limit {limit})")]
    Capacity { what: String, limit: usize },
    #[error("rational arithmetic overflow")]
    Overflow,
    #[error("'{0}' is a reserved name")]
    ReservedName(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    pub(crate) fn capacity(what: impl Into<String>, limit: usize) -> Self {
        Error::Capacity {
            what: what.into(),
            limit,
        }
    }

    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}
