use std::io;
use std::path::Path;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },

    /// The list file never reached its data region.
    #[error("{input}: data region not found (missing sentinel: {sentinel})")]
    MissingSentinel {
        input: String,
        sentinel: &'static str,
    },

    /// A structured input (snapshot, census table, config) failed validation.
    /// `line` is 1-based and counts the header line.
    #[error("{input}:{line}: {message}")]
    Format {
        input: String,
        line: u64,
        message: String,
    },

    #[error("need at least {required} eligible roles for binning, found {eligible}")]
    TooFewEligible { eligible: usize, required: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn io(context: impl Into<String>, source: io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub fn io_at(path: &Path, source: io::Error) -> Self {
        Self::io(path.display().to_string(), source)
    }

    pub fn format(input: impl Into<String>, line: u64, message: impl Into<String>) -> Self {
        Error::Format {
            input: input.into(),
            line,
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line frontend.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) => 1,
            Error::MissingSentinel { .. } | Error::Format { .. } | Error::TooFewEligible { .. } => 2,
            Error::Io { .. } => 3,
        }
    }
}
