//! Command failure carrying the process exit code.
//!
//! Exit code contract: `0` success, `1` usage error (bad flags, malformed
//! or inconsistent configuration), `2` data error (missing or invalid
//! input files, contract violations in their contents).

use std::fmt;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
        }
    }

    pub fn usage(message: impl Into<String>) -> Failure {
        Failure::Usage(message.into())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Data(m) => f.write_str(m),
        }
    }
}

/// Library errors default to data errors; commands wrap configuration
/// problems in [`Failure::usage`] explicitly.
impl From<scorealign::Error> for Failure {
    fn from(e: scorealign::Error) -> Failure {
        Failure::Data(e.to_string())
    }
}

pub type CmdResult<T> = std::result::Result<T, Failure>;
