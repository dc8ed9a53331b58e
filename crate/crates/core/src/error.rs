use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} index {index} out of range (size {size})")]
    OutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },

    #[error("capacity exceeded: {requested} qubits requested, {engine} engine holds at most {max}; {hint}")]
    Capacity {
        engine: &'static str,
        requested: usize,
        max: usize,
        hint: &'static str,
    },

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("operator is not Hermitian: {0}")]
    NonHermitian(String),

    #[error("projection onto a null subspace (probability {0:e})")]
    ProjectionNull(f64),

    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("ground state is degenerate (gap {0:e})")]
    DegenerateGround(f64),

    #[error("degenerate gradient: {0}")]
    DegenerateGradient(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
