use serde::Serialize;
use thiserror::Error;

/// A single failed validation rule, tagged with the classification clause it
/// belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: String,
    pub message: String,
}

impl Violation {
    pub fn new(clause: &str, message: impl Into<String>) -> Self {
        Violation { clause: clause.to_string(), message: message.into() }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] {}", self.clause, self.message)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("degenerate form: quotient by the radical first")]
    Degenerate,
    #[error("over budget: {0}")]
    OverBudget(String),
    #[error("stratum violation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Stratum(Vec<Violation>),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown example tag `{0}`")]
    UnknownTag(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("family mismatch: {0}")]
    FamilyMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
