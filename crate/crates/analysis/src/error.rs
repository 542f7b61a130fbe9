use junction_core::CoreError;
use junction_fem::FemError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("gaps change sign; wrong limit or not in the asymptotic regime: {0}")]
    MixedSigns(String),
    #[error("epsilon grids differ")]
    GridMismatch,
    #[error(transparent)]
    Fem(#[from] FemError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, AnalysisError>;
