//! Library backing the `rho` binary: spec/config ingestion, run manifests,
//! output formats, and the verification suites.

pub mod formats;
pub mod manifest;
pub mod runner;
pub mod suites;

/// Process exit codes of the `rho` binary.
pub mod exit_codes {
    pub const OK: i32 = 0;
    pub const PROPERTY_FAILURE: i32 = 1;
    pub const INVALID_SPEC: i32 = 2;
    pub const INVALID_POINT: i32 = 3;
    pub const IO: i32 = 4;
}

/// Error with a process exit code attached.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid_spec(msg: impl Into<String>) -> Self {
        CliError { code: exit_codes::INVALID_SPEC, message: msg.into() }
    }

    pub fn invalid_point(msg: impl Into<String>) -> Self {
        CliError { code: exit_codes::INVALID_POINT, message: msg.into() }
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError { code: exit_codes::IO, message: msg.into() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::io(e.to_string())
    }
}
