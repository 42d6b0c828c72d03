use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("non-finite matrix or vector entry")]
    NonFinite,

    #[error("matrix is not Hermitian within tolerance")]
    NotHermitian,

    #[error("absorption probability {0} outside [0, 1]")]
    AbsorptionOutOfRange(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("{0}")]
    Usage(String),
}
