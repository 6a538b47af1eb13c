use thiserror::Error;

/// Errors raised by the analyses in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("region has no real point inside the search window")]
    EmptyRegion,

    #[error("x = {x} lies outside the real interval ({lo}, {hi}) of the region")]
    OutOfInterval { x: f64, lo: f64, hi: f64 },

    #[error("region has no inscribed shifted cone: {0}")]
    NoCone(String),

    #[error("radius function undefined for this region: {0}")]
    UnsupportedRadius(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix must be non-empty")]
    EmptyMatrix,

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("dimension {n} exceeds the principal-minor cap {cap}")]
    DimensionTooLarge { n: usize, cap: usize },

    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("diagonal scaling must have positive entries of length {expected}")]
    BadDiagonal { expected: usize },

    #[error("matrices are not upper or lower triangular together")]
    NotTriangular,

    #[error("matrices are not simultaneously triangularizable: {0}")]
    NotSimultaneouslyTriangularizable(String),

    #[error("hypothesis violated: {0}")]
    PreconditionFailed(String),

    #[error("A must be a scalar multiple aI with a < 0")]
    NotScalarA,

    #[error("matrix dimension {0} is odd; block reduction needs an even dimension")]
    OddDimension(usize),

    #[error("off-diagonal block A12 is singular (condition number {cond:e})")]
    SingularA12 { cond: f64 },

    #[error("off-diagonal block A12 is not the identity")]
    A12NotIdentity,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
