use thiserror::Error;

/// Errors raised while validating inputs or running a computation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("expected {expected} entries for dimension {dim}, found {found}")]
    EntryCount {
        dim: usize,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not Hermitian: residual {residual:e} at ({row}, {col})")]
    NotHermitian {
        row: usize,
        col: usize,
        residual: f64,
    },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("entry ({row}, {col}) is not strictly positive")]
    NotPositive { row: usize, col: usize },

    #[error("entry ({row}, {col}) is negative")]
    NegativeEntry { row: usize, col: usize },

    #[error("Bloch vector length {r} exceeds 1")]
    OutsideBlochBall { r: f64 },

    #[error("state is not normalized: norm {norm}")]
    NotNormalized { norm: f64 },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("ensemble does not reconstruct the state: max entry deviation {deviation:e}")]
    Reconstruction { deviation: f64 },

    #[error("ensemble size {size} is smaller than rank {rank}")]
    EnsembleTooSmall { size: usize, rank: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {dim}: {hint}")]
    UnsupportedDimension { dim: usize, hint: String },

    #[error("phases are not aligned; state needs the x1 feasibility analysis")]
    NotPhaseAligned,

    #[error("peeling did not terminate within {0} steps")]
    PeelLimit(usize),

    #[error("invalid option: {0}")]
    InvalidOption(String),
}

pub type Result<T> = std::result::Result<T, Error>;
