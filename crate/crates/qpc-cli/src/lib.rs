//! Library side of the `qpc` command-line tool: state-file IO, the
//! command implementations, and the error-to-exit-code mapping. The
//! binary in `main.rs` only parses arguments and dispatches here.

pub mod commands;
pub mod statefile;

/// Failures surfaced to the user, each with its own exit code so
/// scripts can tell them apart:
///
/// - bad flag values → 2 (same code clap uses for unparseable flags),
/// - unreadable or malformed input files → 3,
/// - inputs that parse but violate a state invariant → 4.
#[derive(Debug)]
pub enum CliError {
    BadFlags(String),
    Parse(String),
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadFlags(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::BadFlags(m) | CliError::Parse(m) | CliError::Invariant(m) => m,
        }
    }
}

impl From<qpc_core::Error> for CliError {
    fn from(e: qpc_core::Error) -> Self {
        match e {
            qpc_core::Error::ParameterOutOfRange { .. } | qpc_core::Error::InvalidConfig(_) => {
                CliError::BadFlags(e.to_string())
            }
            qpc_core::Error::DimensionMismatch { .. } | qpc_core::Error::NonFiniteEntry { .. } => {
                CliError::Parse(e.to_string())
            }
            _ => CliError::Invariant(e.to_string()),
        }
    }
}
