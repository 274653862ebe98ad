use daelim_core::dsl::ParseError;
use daelim_core::elim::EliminationError;
use daelim_core::reduction::ReductionError;
use thiserror::Error;

use crate::trajectory::TrajectoryError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Trajectory { path: String, source: TrajectoryError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    NotReducible(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("{0}")]
    ResultantVanishes(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Trajectory { .. } | CliError::Usage(_) => 1,
            CliError::NotReducible(_) => 2,
            CliError::Internal(_) => 3,
            CliError::ResultantVanishes(_) => 4,
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::UnknownTarget(_) => CliError::Usage(e.to_string()),
            ReductionError::NotReducible { .. } => CliError::NotReducible(e.to_string()),
            ReductionError::Algebra(a) => CliError::Internal(a.to_string()),
        }
    }
}

impl From<EliminationError> for CliError {
    fn from(e: EliminationError) -> Self {
        match e {
            EliminationError::Reduction(r) => r.into(),
            EliminationError::ResultantVanishes { .. } => CliError::ResultantVanishes(e.to_string()),
            EliminationError::Algebra(a) => CliError::Internal(a.to_string()),
        }
    }
}
