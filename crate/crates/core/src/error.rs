//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Failures surfaced by geometry construction, numerics and spectra.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An input lies outside the supported domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An integrand produced a non-finite value at the reported sample point.
    #[error("non-finite integrand sample at (theta = {theta}, phi = {phi})")]
    NonFiniteSample { theta: f64, phi: f64 },

    /// Order doubling exhausted without two successive estimates agreeing.
    #[error(
        "quadrature did not converge at order {order}: last two estimates \
         {prev_re}{prev_im:+}i and {last_re}{last_im:+}i differ by {delta:e} (tolerance {tolerance:e})"
    )]
    QuadratureNotConverged {
        order: usize,
        prev_re: f64,
        prev_im: f64,
        last_re: f64,
        last_im: f64,
        delta: f64,
        tolerance: f64,
    },

    /// A size guard was exceeded.
    #[error("resource guard: {0}")]
    Resource(String),

    /// A spectrum input violated positive semidefiniteness beyond tolerance.
    #[error("PSD violation: eigenvalue {eigenvalue:e} below allowed floor {floor:e}")]
    PsdViolation { eigenvalue: f64, floor: f64 },

    /// Any other numeric failure (non-finite data, failed iteration, ...).
    #[error("numeric error: {0}")]
    Numeric(String),
}
