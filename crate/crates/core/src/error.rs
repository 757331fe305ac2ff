//! Crate-wide error type and `Result` alias.

use std::path::PathBuf;

/// All failure modes surfaced by this crate.
///
/// Variants are grouped by where they arise so that callers (notably the
/// command-line front end) can map them onto coarse exit categories:
/// everything here describes a problem with input data or a violated
/// precondition, never an internal bug.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Underlying I/O failure, annotated with the path involved.
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A record in a line- or row-oriented input file could not be read.
    /// `line` is 1-based and counts physical lines (or CSV records).
    #[error("{path}:{line}: {message}")]
    Record {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// A bracketed parse tree could not be parsed. `offset` is the 0-based
    /// character offset into the input string at which the problem was found.
    #[error("{message} at offset {offset}")]
    TreeSyntax { message: String, offset: usize },

    /// A tree-pattern expression could not be parsed.
    #[error("invalid tree pattern {pattern:?}: {message}")]
    PatternSyntax { pattern: String, message: String },

    /// A statistic is undefined for the given inputs (for example a
    /// correlation over a constant sequence). The message states why.
    #[error("metric undefined: {0}")]
    Degenerate(String),

    /// A caller-supplied argument violated a documented precondition.
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Convenience constructor for [`Error::Invalid`].
    pub fn invalid(message: impl Into<String>) -> Self {
        Error::Invalid(message.into())
    }

    /// Convenience constructor for [`Error::Io`].
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Convenience constructor for [`Error::Record`].
    pub fn record(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Record {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
