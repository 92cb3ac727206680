//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric parameter lies outside its mathematical domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A sampling design violates its constraints (duplicate sites, empty
    /// observation set, target outside the bracketing hull, ...).
    #[error("invalid design: {0}")]
    InvalidDesign(String),

    /// Cholesky factorization failed: the covariance matrix is not positive
    /// definite. `leading_minor` is the 1-based order of the first leading
    /// principal minor that is not positive.
    #[error("covariance matrix is not positive definite: leading minor of order {leading_minor} is not positive")]
    SingularModel { leading_minor: usize },

    /// A design file could not be parsed as JSON.
    #[error("design file: {0}")]
    DesignFormat(#[from] serde_json::Error),

    /// One row of an efficiency CSV file is malformed.
    #[error("csv line {line}: {message}")]
    CsvFormat { line: usize, message: String },

    /// A grid point of an efficiency sweep failed; carries the coordinates.
    #[error("sweep failed at (n={n}, alpha={alpha}, r={r}): {source}")]
    SweepPoint {
        n: usize,
        alpha: f64,
        r: f64,
        #[source]
        source: Box<Error>,
    },
}
