use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the simulator library.
#[derive(Debug, Error)]
pub enum GameError {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid configuration: {field}: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("policy mismatch: {0}")]
    Policy(String),

    #[error(
        "game too large for exhaustive enumeration: {profiles} profiles exceeds guard of {guard}"
    )]
    SizeGuard { profiles: f64, guard: u64 },

    #[error("failed to parse scenario {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl GameError {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        GameError::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        GameError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = GameError> = std::result::Result<T, E>;
