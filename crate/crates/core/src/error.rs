use thiserror::Error;

/// Errors raised across the crate.
///
/// Variants map onto the command-line exit codes in [`crate::cli::ExitCode`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("operator norm {norm} exceeds 1 (tolerance {tol:e})")]
    Normalization { norm: f64, tol: f64 },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("gap promise violated: {0}")]
    GapPromise(String),

    #[error("degenerate ground state: eigenvalues {0} and {1} coincide")]
    DegenerateGround(f64, f64),

    #[error("budget infeasible: {0}")]
    Infeasible(String),

    #[error("emulation failed: {0}")]
    Emulation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
