use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("predicate error: {0}")]
    Predicate(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] btds_core::Error),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl LabError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> LabError {
        let path = path.into();
        move |source| LabError::Io { path, source }
    }

    /// 1 for broken internal invariants, 2 for anything the input caused.
    pub fn exit_code(&self) -> u8 {
        use btds_core::Error as E;
        match self {
            LabError::Internal(_) => 1,
            LabError::Core(E::OracleDisagreement(_) | E::InternalEquivalenceViolation(_)) => 1,
            _ => 2,
        }
    }
}
