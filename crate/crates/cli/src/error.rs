use std::path::PathBuf;

use atomlaser::{TruncationError, ValidationError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}", validation_message(.violations, .other))]
    Validation {
        violations: ValidationError,
        other: Vec<String>,
    },
    #[error("{0}")]
    Truncation(#[from] TruncationError),
    #[error("unknown channel `{0}` (expected one of re_a, im_a, n, nn, re_a2, im_a2, Q, S1, S2)")]
    UnknownChannel(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("worker pool: {0}")]
    Pool(String),
}

fn validation_message(v: &ValidationError, other: &[String]) -> String {
    let mut parts: Vec<String> = v.0.iter().map(|x| x.to_string()).collect();
    parts.extend(other.iter().cloned());
    format!("invalid configuration: {}", parts.join("; "))
}

impl CliError {
    /// 2 validation, 3 truncation, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Validation { .. } | CliError::UnknownChannel(_) => 2,
            CliError::Truncation(_) => 3,
            CliError::Io { .. } | CliError::Pool(_) => 4,
        }
    }
}

impl From<atomlaser::Error> for CliError {
    fn from(e: atomlaser::Error) -> Self {
        match e {
            atomlaser::Error::Validation(v) => CliError::Validation {
                violations: v,
                other: Vec::new(),
            },
            atomlaser::Error::Truncation(t) => CliError::Truncation(t),
        }
    }
}
