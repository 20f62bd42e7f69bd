use std::path::PathBuf;

use thiserror::Error;
use voaplus_core::autgroup::AutError;
use voaplus_core::classify::ClassifyError;
use voaplus_core::polysolve::SolveError;
use voaplus_core::rational::ParseRationalError;
use voaplus_core::{AlgebraError, LatticeError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cli: cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cli: cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("cli: {path}: {message}")]
    Json { path: PathBuf, message: String },
    #[error("cli: {0}")]
    Usage(String),
    #[error("rational: {0}")]
    Parse(#[from] ParseRationalError),
    #[error("lattice: {0}")]
    Lattice(#[from] LatticeError),
    #[error("algebra: {0}")]
    Algebra(#[from] AlgebraError),
    #[error("classify: {0}")]
    Classify(ClassifyError),
    #[error("polysolve: {0}")]
    Solve(#[from] SolveError),
    #[error("autgroup: {0}")]
    Aut(AutError),
    /// The command ran but a check it performs failed.
    #[error("verification failed: {0}")]
    CheckFailed(String),
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Algebra(e) => CliError::Algebra(e),
            ClassifyError::Solve(e) => CliError::Solve(e),
            e => CliError::Classify(e),
        }
    }
}

impl From<AutError> for CliError {
    fn from(e: AutError) -> Self {
        match e {
            AutError::Classify(e) => e.into(),
            AutError::Solve(e) => CliError::Solve(e),
            e => CliError::Aut(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::CheckFailed(_) => 1,
            _ => 2,
        }
    }
}
