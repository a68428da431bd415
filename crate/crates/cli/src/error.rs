use std::path::PathBuf;

use thiserror::Error;

/// Everything the command-line front end can fail with. Each variant maps to
/// a fixed process exit code, see [`CliError::exit_code`].
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {msg}")]
    Parse { path: PathBuf, msg: String },

    #[error("window selection failed: {0}")]
    Window(mimpeak::Error),

    #[error("estimator failed: {0}")]
    Estimator(mimpeak::Error),

    #[error("config error: {0}")]
    Config(String),

    #[error("cannot write {path}: {msg}")]
    Write { path: PathBuf, msg: String },

    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Parse { .. } => 2,
            CliError::Window(_) => 3,
            CliError::Estimator(_) | CliError::SelfCheck(_) => 4,
            CliError::Config(_) | CliError::Write { .. } => 5,
        }
    }

    /// Sorts a library error raised while selecting a window or estimating.
    pub fn from_core(err: mimpeak::Error) -> Self {
        use mimpeak::Error as E;
        match err {
            E::EmptyWindow { .. } | E::TooFewSamples { .. } | E::DegenerateWindow(_) => {
                CliError::Window(err)
            }
            E::InvalidExperiment(_) | E::InvalidIteration(_) | E::InvalidModel(_) | E::InvalidRange(_) => {
                CliError::Config(err.to_string())
            }
            _ => CliError::Estimator(err),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
