use thiserror::Error;

#[derive(Debug, Error)]
pub enum FemError {
    #[error("invalid mesh parameters: {0}")]
    InvalidParameters(String),
    #[error("degenerate triangle {0}")]
    DegenerateTriangle(usize),
    #[error("no free vertices: every vertex is constrained")]
    NoFreeVertices,
    #[error("matrix not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("Lanczos did not converge in {iterations} iterations (worst residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("{0}")]
    Precondition(String),
    #[error("point ({0}, {1}) lies outside the mesh")]
    OutsideMesh(f64, f64),
}

pub type Result<T> = std::result::Result<T, FemError>;
