use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A transform was evaluated on (or too close to) the support of its measure.
    #[error("point {z} lies within {tol:e} of the support")]
    Domain { z: Complex64, tol: f64 },

    /// Evaluation at a root of the polynomial.
    #[error("point {0} coincides with a root")]
    Pole(Complex64),

    /// Aberth iteration did not converge. Carries the unconverged approximations
    /// and their normalized residuals.
    #[error("solver did not converge after {sweeps} sweeps ({} points unconverged)", .unconverged.len())]
    Convergence {
        sweeps: usize,
        unconverged: Vec<Complex64>,
        residuals: Vec<f64>,
    },

    /// QR iteration exhausted its sweep budget.
    #[error("eigenvalue iteration did not converge after {0} sweeps")]
    EigenConvergence(usize),

    #[error("matrix is singular")]
    Singular,

    #[error("near-singular denominator {0:e}")]
    NearSingular(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
