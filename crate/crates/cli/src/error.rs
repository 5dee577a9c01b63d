use std::path::Path;

use orbitdim_core::Error as CoreError;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// A numerical check did not hold.
    pub const CHECK_FAILED: i32 = 1;
    /// Malformed input, invalid state or bad arguments.
    pub const INVALID_INPUT: i32 = 2;
    /// The picture does not fit the kind of state in the file.
    pub const PICTURE_MISMATCH: i32 = 3;
    /// Time evolution leaked beyond the truncation tolerance.
    pub const LEAKAGE: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid state: {0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("{file}: {inner}")]
    InFile { file: String, inner: Box<CliError> },
}

impl CliError {
    pub fn in_file(self, path: &Path) -> Self {
        CliError::InFile { file: path.display().to_string(), inner: Box::new(self) }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::PictureMismatch { .. }) => exit::PICTURE_MISMATCH,
            CliError::Core(CoreError::Leakage { .. }) => exit::LEAKAGE,
            CliError::InFile { inner, .. } => inner.exit_code(),
            _ => exit::INVALID_INPUT,
        }
    }
}
