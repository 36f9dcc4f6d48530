use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of a numerical function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A censoring scheme violates one of its admissibility constraints.
    #[error("invalid censoring scheme: {0}")]
    InvalidScheme(String),

    /// Sample data is inconsistent with its scheme or with the model.
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    /// One population contributed no failures, so its scale MLE sits at the
    /// boundary. The shape estimate and the defined scale estimate are kept.
    #[error(
        "boundary fit: k1={k1}, k2={k2} (alpha={alpha}, lambda1={lambda1}, lambda2={lambda2})"
    )]
    Boundary {
        alpha: f64,
        lambda1: f64,
        lambda2: f64,
        k1: usize,
        k2: usize,
    },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("root bracketing failed: {0}")]
    Bracket(String),

    /// The AMLE quadratic has no admissible positive root.
    #[error("AMLE degenerate: q2={q2}, q1={q1}")]
    AmleDegenerate { q2: f64, q1: f64 },

    #[error("observed information matrix is singular or not positive definite")]
    SingularInformation,

    #[error("bootstrap: {failed} of {total} replications failed to fit")]
    BootstrapFailures { failed: usize, total: usize },

    #[error("exhaustive enumeration would produce {count} schemes (cap {cap})")]
    TooManySchemes { count: u128, cap: u128 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Numerical failures, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::Bracket(_)
                | Error::AmleDegenerate { .. }
                | Error::SingularInformation
                | Error::BootstrapFailures { .. }
                | Error::Boundary { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
