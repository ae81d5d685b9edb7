use std::io;

use horolab::ErrorClass;
use thiserror::Error;

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_PRECISION: i32 = 4;
pub const EXIT_COMPUTATION: i32 = 5;
pub const EXIT_IO: i32 = 6;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] horolab::Error),

    #[error("i/o error on `{path}`: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn io(path: impl Into<String>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Machine-readable name of the error class.
    pub fn code(&self) -> &'static str {
        match self.exit_code() {
            EXIT_VALIDATION => "validation",
            EXIT_CAPACITY => "capacity",
            EXIT_PRECISION => "precision",
            EXIT_COMPUTATION => "computation",
            _ => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_VALIDATION,
            CliError::Core(e) => match e.class() {
                ErrorClass::Validation => EXIT_VALIDATION,
                ErrorClass::Capacity => EXIT_CAPACITY,
                ErrorClass::Precision => EXIT_PRECISION,
                ErrorClass::Computation => EXIT_COMPUTATION,
            },
            CliError::Io { .. } => EXIT_IO,
        }
    }
}
