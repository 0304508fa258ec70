use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e} > tolerance {tolerance:.3e})")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("eigensolver failed to converge for eigenvalue {index}")]
    NoConvergence { index: usize },

    #[error("eigenvalue pairing violated: max pair gap {gap:.3e} exceeds tolerance {tolerance:.3e}")]
    PairingViolation { gap: f64, tolerance: f64 },

    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("quadrature did not converge to tolerance {tolerance:.1e} on [{lo}, {hi}]")]
    QuadratureNoConvergence { lo: f64, hi: f64, tolerance: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("trial {trial}: {source}")]
    Trial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
