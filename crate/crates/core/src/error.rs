use thiserror::Error;

/// Errors raised by the precoding library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("infeasible point: {0}")]
    Infeasible(String),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("channel matrix is zero")]
    ZeroChannel,
    #[error("objective is not finite at the starting point")]
    NonFiniteObjective,
}

pub type Result<T> = std::result::Result<T, Error>;
