use std::path::PathBuf;

use thiserror::Error;

/// Exit codes: 0 success, 2 validation error, 3 numeric failure,
/// 4 IO error.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{col}: parse error: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        col: usize,
        message: String,
    },

    #[error("entry ({row}, {col}) is negative")]
    NegativeEntry { row: usize, col: usize },

    #[error("map requested axis {requested}, decomposition has {available}")]
    NotEnoughAxes { requested: usize, available: usize },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] powerca::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. }
            | CliError::NegativeEntry { .. }
            | CliError::NotEnoughAxes { .. }
            | CliError::Usage(_) => 2,
            CliError::Core(err) => match err {
                powerca::Error::NoConvergence { .. }
                | powerca::Error::ZeroMatrix
                | powerca::Error::CenteringViolation { .. }
                | powerca::Error::SvdNoConvergence => 3,
                _ => 2,
            },
            CliError::Io { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}
