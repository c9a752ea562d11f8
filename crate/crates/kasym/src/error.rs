use std::path::PathBuf;

use serde::Serialize;
use serde_json::json;

/// One invalid input, named by its flag or config key.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldError {
    pub field: String,
    pub reason: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        FieldError {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {}", summarize(.0))]
    Validation(Vec<FieldError>),

    #[error("{0}")]
    Usage(String),

    #[error("cannot parse {path}: {message}")]
    Parse {
        path: PathBuf,
        message: String,
        line: Option<usize>,
        column: Option<usize>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Numeric(#[from] kasym_core::Error),
}

fn summarize(errors: &[FieldError]) -> String {
    errors
        .iter()
        .map(|e| format!("{}: {}", e.field, e.reason))
        .collect::<Vec<_>>()
        .join("; ")
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Usage(_) => "usage",
            CliError::Parse { .. } => "parse",
            CliError::Io { .. } => "io",
            CliError::Numeric(_) => "numeric",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Usage(_) | CliError::Parse { .. } => 2,
            CliError::Io { .. } | CliError::Numeric(_) => 1,
        }
    }

    /// The machine-readable object written to stderr.
    pub fn to_json(&self) -> serde_json::Value {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string() });
        match self {
            CliError::Validation(fields) => body["fields"] = json!(fields),
            CliError::Parse { path, line, column, .. } => {
                body["path"] = json!(path);
                body["line"] = json!(line);
                body["column"] = json!(column);
            }
            CliError::Io { path, .. } => body["path"] = json!(path),
            CliError::Usage(_) | CliError::Numeric(_) => {}
        }
        json!({ "error": body })
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
