//! Errors and the exit codes they map to.

use std::path::PathBuf;

use groupshare::Error;

pub const OK: u8 = 0;
pub const GENERATION_FAILED: u8 = 2;
pub const ACCESS_DENIED: u8 = 3;
pub const VERIFICATION_FAILED: u8 = 4;
pub const IO: u8 = 5;
pub const MALFORMED_INPUT: u8 = 6;
pub const USAGE: u8 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error("replayed transcript differs from the recorded one at line {line}")]
    ReplayMismatch { line: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e {
                Error::GenerationFailed { .. } => GENERATION_FAILED,
                Error::AccessDenied { .. } => ACCESS_DENIED,
                Error::PaddingFailed { .. }
                | Error::ProtocolCorruption(_)
                | Error::UpdateAborted(_)
                | Error::Dealing(_) => VERIFICATION_FAILED,
                _ => MALFORMED_INPUT,
            },
            CliError::Io { .. } => IO,
            CliError::Usage(_) => USAGE,
            CliError::ReplayMismatch { .. } => VERIFICATION_FAILED,
        }
    }
}
