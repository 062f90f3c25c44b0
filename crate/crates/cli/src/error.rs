use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("theta = {theta}: degenerate lambda ({reason})")]
    DegenerateTheta { theta: f64, reason: String },
    #[error("theta = {theta}: {source}")]
    AtTheta { theta: f64, source: mlsurf_core::Error },
    #[error(transparent)]
    Core(#[from] mlsurf_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config {}: {source}", path.display())]
    Config { path: PathBuf, source: serde_json::Error },
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::DegenerateTheta { .. } => 3,
            CliError::AtTheta { source, .. } | CliError::Core(source) if source.is_degeneracy() => 3,
            _ => 2,
        }
    }

    pub fn at(theta: f64) -> impl Fn(mlsurf_core::Error) -> CliError {
        move |source| CliError::AtTheta { theta, source }
    }
}
