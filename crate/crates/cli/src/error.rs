use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Solver(#[from] crat_core::Error),
    #[error("no certificate within the degree budget {0}")]
    Budget(usize),
    #[error("verification failed: {}", .0.join("; "))]
    Verify(Vec<String>),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn schema(msg: impl Into<String>) -> Self {
        CliError::Schema(msg.into())
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Solver(_) | CliError::Budget(_) => 3,
            CliError::Verify(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Schema(_) => "Schema",
            CliError::Solver(e) => e.kind(),
            CliError::Budget(_) => "DegreeBudget",
            CliError::Verify(_) => "Verify",
            CliError::Io(_) => "Io",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
