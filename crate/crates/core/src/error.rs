use thiserror::Error;

/// Errors produced by body validation, the optimizers and the modulus solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("body is not origin-symmetric: {0}")]
    Asymmetric(String),

    #[error("body is not convex at index {index}")]
    Nonconvex { index: usize },

    #[error("origin is not an interior point of the body")]
    OriginNotInterior,

    #[error("body is degenerate: inner/outer radius ratio {ratio:e} is below 1e-6")]
    Degenerate { ratio: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("linear map is singular (det = {det:e})")]
    SingularMap { det: f64 },

    #[error("argument {value} is outside the domain [{lo}, {hi}]")]
    Domain { value: f64, lo: f64, hi: f64 },

    #[error("optimizer did not converge after {iterations} iterations (best ratio {best_ratio})")]
    NonConvergence { iterations: usize, best_ratio: f64 },

    #[error("cell {index}: {source}")]
    Cell {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(
        "modulus solver hit the iteration limit ({iterations}); shortest path {min_path_length}, \
         duality gap estimate {gap:e}"
    )]
    SolverLimit {
        iterations: usize,
        min_path_length: f64,
        gap: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
