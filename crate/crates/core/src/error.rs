use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("eigenvalue {index} failed to converge after {iterations} iterations")]
    NonConvergence { index: usize, iterations: usize },
    #[error("matrix is not upper Hessenberg (entry ({row}, {col}) has modulus {modulus:e})")]
    NotHessenberg { row: usize, col: usize, modulus: f64 },
    #[error("matrix is not real symmetric / Hermitian")]
    NotHermitian,
    #[error("symbol is not Hermitian-valued")]
    NotHermitianSymbol,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("coefficient at index {index} has modulus {modulus:e}, above the bound guard {bound:e}")]
    Unbounded { index: usize, modulus: f64, bound: f64 },
    #[error("averaging grid of {grid} points is too coarse for order {order} (need at least {required})")]
    GridTooCoarse { order: usize, grid: usize, required: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
