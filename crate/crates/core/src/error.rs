//! Error type shared by the whole crate.

use crate::quadrature::KernelValue;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Coefficients violate uniform ellipticity (alpha > 0, gamma > 0,
    /// beta / sqrt(alpha gamma) > -1).
    #[error(
        "non-elliptic coefficients alpha={alpha}, beta={beta}, gamma={gamma}: \
         requires alpha > 0, gamma > 0 and beta/sqrt(alpha*gamma) > -1"
    )]
    NonElliptic { alpha: f64, beta: f64, gamma: f64 },

    /// The requested combination of regime, direction or coefficients is
    /// outside what the closed forms cover.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative solver ran out of iterations.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: u32, residual: f64 },

    /// The quadrature finished but its error estimate exceeds the target.
    /// The best value computed so far is carried along.
    #[error(
        "quadrature tolerance not achieved: target {target:.3e}, achieved {achieved:.3e} \
         (best value {})", best.value
    )]
    ToleranceNotAchieved {
        target: f64,
        achieved: f64,
        best: KernelValue,
    },

    /// The integral's value is below the cancellation noise floor of its
    /// gross mass; a direct contour cannot resolve it.
    #[error("cancellation-dominated integral: value {value:.3e} below noise floor {noise:.3e}")]
    CancellationDominated { value: f64, noise: f64 },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
