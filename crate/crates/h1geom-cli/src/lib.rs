//! Spec parsing, report output, and the verification suite behind the
//! `h1geom` binary.

pub mod report;
pub mod spec;
pub mod verify;

/// Errors split by exit code: configuration problems exit with 2,
/// computation failures with 3.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Compute(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Compute(m) => write!(f, "computation error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<h1geom::Error> for CliError {
    fn from(e: h1geom::Error) -> CliError {
        CliError::Compute(e.to_string())
    }
}
