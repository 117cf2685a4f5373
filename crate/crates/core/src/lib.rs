//! Spatial correlation and degrees-of-freedom analysis for arched antenna arrays.
//!
//! An arched uniform linear array (ULA) is a line of antenna elements bent
//! along a circular arc in the YZ-plane; an arched uniform rectangular array
//! (URA) replicates that arc along the X-axis. Under half-space isotropic
//! scattering the inter-element spatial correlation has a closed form: a
//! normalized sinc of the chord distance between elements. This crate
//! provides
//!
//! - array geometry construction ([`geometry`]),
//! - far-field distances, phase differences and steering vectors
//!   ([`wavefield`]),
//! - the closed-form correlation matrices ([`correlation`]),
//! - an independent brute-force quadrature oracle for the underlying double
//!   integral, plus the odd-order residual series ([`oracle`]),
//! - eigenvalue spectra and degrees-of-freedom metrics ([`spectrum`]),
//! - the special functions and quadrature rules everything else is built on
//!   ([`numerics`]).
//!
//! All numeric code is generic over the scalar type via [`Real`] (`f32` or
//! `f64`); concrete `f64` aliases are exported at the crate root. `f64` is
//! the type the documented tolerances are stated for.

// Validation guards use the `!(x > 0)` form on purpose: it rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlation;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod oracle;
pub mod scalar;
pub mod spectrum;
pub mod wavefield;

pub use correlation::{CorrelationMatrix, MatrixKind};
pub use error::{Error, Result};
pub use geometry::{ArchedUlaGeometry, ArchedUraGeometry, ArrayGeometry, Curvature, Point3};
pub use numerics::{Complex, QuadratureRule};
pub use oracle::{HermitianCorrelation, OracleSettings, ValidationReport};
pub use scalar::Real;
pub use spectrum::{DofReport, EigenSpectrum};
pub use wavefield::{Direction, SteeringVector, UserLocation};

/// `f64` arched ULA geometry.
pub type ArchedUla64 = ArchedUlaGeometry<f64>;
/// `f32` arched ULA geometry.
pub type ArchedUla32 = ArchedUlaGeometry<f32>;
/// `f64` arched URA geometry.
pub type ArchedUra64 = ArchedUraGeometry<f64>;
/// `f32` arched URA geometry.
pub type ArchedUra32 = ArchedUraGeometry<f32>;
/// `f64` closed-form correlation matrix.
pub type CorrelationMatrix64 = CorrelationMatrix<f64>;
/// `f64` complex oracle correlation matrix.
pub type HermitianCorrelation64 = HermitianCorrelation<f64>;
/// `f64` eigenvalue spectrum.
pub type EigenSpectrum64 = EigenSpectrum<f64>;
/// `f64` complex scalar.
pub type Complex64 = Complex<f64>;
