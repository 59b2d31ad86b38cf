use std::fmt;
use std::process::ExitCode;

/// Process exit status. The numeric values are part of the interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    /// Diagnostics were reported or the operation failed on its input.
    Failed = 1,
    Usage = 2,
    /// A required executable, file or directory is missing or unusable.
    Environment = 3,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> ExitCode {
        ExitCode::from(s as u8)
    }
}

#[derive(Debug)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn failed(message: impl Into<String>) -> CliError {
        CliError { status: Status::Failed, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> CliError {
        CliError { status: Status::Usage, message: message.into() }
    }

    pub fn env(message: impl Into<String>) -> CliError {
        CliError { status: Status::Environment, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}
