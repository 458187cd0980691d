use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("zero pivot in row {row} of incomplete factorization")]
    ZeroPivot { row: usize },
    #[error("{what} solve did not converge: {iterations} iterations, relative residual {residual:.3e}")]
    NotConverged { what: &'static str, iterations: usize, residual: f64 },
    #[error("CFL violation in {what}: {value:.4} exceeds limit {limit:.4}")]
    Cfl { what: &'static str, value: f64, limit: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("solution diverged: {0}")]
    Diverged(String),
    #[error("no phase-2 volume present")]
    EmptyBubble,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
