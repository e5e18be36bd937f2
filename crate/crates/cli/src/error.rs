//! Process-level error handling: every failure maps to one of the
//! documented exit codes (0 success, 1 verification failure, 2 usage or
//! config error, 3 resource limit).

use std::fmt;
use std::io;

/// Exit code for a run whose verification checks did not all pass.
pub const EXIT_VERIFY_FAILED: i32 = 1;
/// Exit code for usage and configuration errors.
pub const EXIT_CONFIG: i32 = 2;
/// Exit code for exceeding a size limit.
pub const EXIT_SIZE_LIMIT: i32 = 3;

#[derive(Debug)]
pub enum AppError {
    Config(String),
    Core(ejmnet::Error),
    Io(io::Error),
}

pub type AppResult<T> = Result<T, AppError>;

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Core(ejmnet::Error::SizeLimit { .. }) => EXIT_SIZE_LIMIT,
            _ => EXIT_CONFIG,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Config(msg) => write!(f, "{msg}"),
            AppError::Core(e) => write!(f, "{e}"),
            AppError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<ejmnet::Error> for AppError {
    fn from(e: ejmnet::Error) -> Self {
        AppError::Core(e)
    }
}

impl From<io::Error> for AppError {
    fn from(e: io::Error) -> Self {
        AppError::Io(e)
    }
}
