use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid {nx}x{ny}: both dimensions must be at least 1")]
    InvalidGrid { nx: usize, ny: usize },

    #[error("invalid partition {px}x{py} for a grid with {cells_x}x{cells_y} cells")]
    InvalidPartition {
        px: usize,
        py: usize,
        cells_x: usize,
        cells_y: usize,
    },

    #[error("invalid band shape: n = {n}, kl = {kl}, ku = {ku}")]
    InvalidBand { n: usize, kl: usize, ku: usize },

    #[error("matrix is singular or not positive definite: pivot {pivot:e} at index {index}")]
    SingularPivot { index: usize, pivot: f64 },

    #[error("subdomain {subdomain}: {source}")]
    Subdomain {
        subdomain: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("no such subdomain {id} (partition has {count})")]
    NoSuchSubdomain { id: usize, count: usize },

    #[error("tolerance must lie in (0, 1), got {0}")]
    InvalidTolerance(f64),

    #[error("conjugate gradient did not converge in {iterations} iterations (relative residual {:e})", history.last().copied().unwrap_or(f64::NAN))]
    NotConverged {
        iterations: usize,
        history: Vec<f64>,
    },

    #[error("invalid timing {0}: times must be positive and finite")]
    InvalidTiming(f64),

    #[error("invalid timing record: {0}")]
    InvalidRecord(String),

    #[error("invalid processor count 0")]
    ZeroProcessors,

    #[error("no goal entry for p = {p}, n = {n}")]
    MissingGoal { p: usize, n: usize },

    #[error("inconsistent goal at p = {p}, n = {n}: T_G * S_G = {product} but T(1,n) = {t1}")]
    InconsistentGoal {
        p: usize,
        n: usize,
        product: f64,
        t1: f64,
    },

    #[error("need at least 3 data points with distinct positive sizes, got {0}")]
    InsufficientData(usize),

    #[error("failed to build worker pool: {0}")]
    WorkerPool(String),
}
