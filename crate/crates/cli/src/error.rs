use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_UNREACHABLE: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_CAP: u8 = 3;
pub const EXIT_UNSUPPORTED: u8 = 4;
pub const EXIT_AUDIT: u8 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read `{path}`: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write `{path}`: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("`{path}` is not valid JSON: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("resource cap exceeded: {0}")]
    Cap(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("gadget audit failed")]
    Audit,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Read { .. } | CliError::Write { .. } | CliError::Parse { .. } => {
                EXIT_INVALID
            }
            CliError::Cap(_) => EXIT_CAP,
            CliError::Unsupported(_) => EXIT_UNSUPPORTED,
            CliError::Audit => EXIT_AUDIT,
        }
    }
}

pub fn invalid(msg: impl std::fmt::Display) -> CliError {
    CliError::Invalid(msg.to_string())
}

pub type Result<T> = std::result::Result<T, CliError>;
