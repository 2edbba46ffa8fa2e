//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside the domain of the requested function
    /// (e.g. Lambert W argument below -1/e, or mu_hat <= mu_c).
    #[error("domain error: {0}")]
    Domain(String),

    /// Caller misuse that is not a physical-domain issue: mismatched lengths,
    /// negative powers, windows outside the grid, missing one-sided data.
    #[error("usage error: {0}")]
    Usage(String),

    /// An invalid run configuration; the message names the violated constraint.
    #[error("config error: {0}")]
    Config(String),

    /// A numerical process failed to converge or produced non-finite values.
    /// `achieved` carries the best available estimate where one exists.
    #[error("numerical failure: {reason}")]
    Numerical {
        reason: String,
        achieved: Option<f64>,
    },

    /// Lanczos iteration hit its cap without meeting the tolerance.
    #[error("lanczos failed to converge within {iterations} iterations (rel. change {rel_change:.3e})")]
    LanczosNoConvergence {
        iterations: usize,
        rel_change: f64,
        /// Last iterate, for post-mortem inspection.
        last: Vec<f64>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn numerical(reason: impl Into<String>) -> Self {
        Error::Numerical {
            reason: reason.into(),
            achieved: None,
        }
    }

    /// Process exit code for the CLI: config problems are 2, numerical
    /// failures 3, i/o failures 4.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Usage(_) | Error::Config(_) => 2,
            Error::Numerical { .. } | Error::LanczosNoConvergence { .. } => 3,
            Error::Io(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
