use num_complex::Complex64;

/// Errors produced anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("invalid filter specification: {0}")]
    InvalidSpec(String),
    #[error("evaluation point {z} lies within {distance:e} of pole {pole}")]
    PoleProximity {
        z: Complex64,
        pole: Complex64,
        distance: f64,
    },
    #[error("elliptic kernel lost precision: {0}")]
    PrecisionLoss(String),
    #[error("degenerate filter: interior minimum {0:e} is below the representable range")]
    DegenerateFilter(f64),
    #[error("shift z = {z} is singular or nearly singular (pivot {pivot:e} near column {column})")]
    SingularShift {
        z: Complex64,
        pivot: f64,
        column: usize,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian: {0}")]
    NotHermitian(String),
    #[error("matrix is not positive definite (Cholesky pivot {pivot:e} at column {column})")]
    NotPositiveDefinite { pivot: f64, column: usize },
    #[error("search subspace collapsed: all {dimension} directions are numerically dependent")]
    RankCollapse { dimension: usize },
    #[error("Jacobi eigenvalue iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("matrix market parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
