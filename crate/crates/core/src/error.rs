use std::fmt;

use crate::funcstruct::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed or schema-violating input. `location` is a JSON path or a
    /// `line:column` pair.
    #[error("{location}: {message}")]
    Parse { location: String, message: String },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("invalid function structure: {0}")]
    InvalidStructure(ValidationReport),

    #[error("vocabulary mismatch: {0}")]
    Vocabulary(String),

    #[error("match is stale: {0}")]
    StaleMatch(String),

    #[error("dangling edge: {0}")]
    DanglingEdge(String),

    #[error("generation limits must be positive")]
    ZeroLimit,

    #[error("unknown rule `{0}`")]
    UnknownRule(String),

    #[error("duplicate rule `{0}`")]
    DuplicateRule(String),

    #[error("case base is empty")]
    EmptyCaseBase,

    #[error("duplicate case id `{0}`")]
    DuplicateCase(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid similarity weights: {0}")]
    InvalidWeights(String),

    #[error("input width mismatch: expected {expected} bits, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("invalid requirement: {0}")]
    InvalidRequirement(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),
}

impl Error {
    pub(crate) fn parse(location: impl fmt::Display, message: impl fmt::Display) -> Self {
        Error::Parse {
            location: location.to_string(),
            message: message.to_string(),
        }
    }

    /// Wraps a serde_json failure, keeping its line and column.
    pub(crate) fn json(err: serde_json::Error) -> Self {
        Error::Parse {
            location: format!("line {}, column {}", err.line(), err.column()),
            message: err.to_string(),
        }
    }
}
