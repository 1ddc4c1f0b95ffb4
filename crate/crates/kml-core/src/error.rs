use thiserror::Error;

/// Errors produced by the finite-model operations.
#[derive(Debug, Error)]
pub enum KmlError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("points {i} and {j} are within {dist:e} of each other (distinctness floor 1e-9)")]
    DuplicatePoints { i: usize, j: usize, dist: f64 },

    #[error("matrix is not Hermitian: max asymmetry {0:e}")]
    NotHermitian(f64),

    #[error("Gram matrix is not positive semidefinite: min eigenvalue {min_eig:e} < -{tol:e}")]
    NotPsd { min_eig: f64, tol: f64 },

    #[error("value vector is not representable in the span: residual {residual:e} > {tol:e}")]
    NotInSpace { residual: f64, tol: f64 },

    #[error("functions live over different bases (point set or kernel)")]
    BaseMismatch,

    #[error("point is not a member of the base point set")]
    PointNotInSet,

    #[error("Gram matrix is numerically singular: min eigenvalue {0:e}")]
    NearSingular(f64),

    #[error("product leaves the target space: {0}")]
    Infeasible(String),

    #[error("not a multiplier: {0}")]
    NotAMultiplier(String),

    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("feature matrix is rank deficient: rank {rank} < {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("sequence failed the consecutive-difference Cauchy test")]
    NotCauchy,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, KmlError>;
