//! Closed-form spatial correlation under half-space isotropic scattering.
//!
//! For both array types the correlation between two elements is the
//! normalized sinc of twice their chord distance in wavelengths:
//! `sinc(2 d / lambda)` with `sinc(x) = sin(pi x)/(pi x)`. For the ULA the
//! chord is `2 R sin((alpha_n - alpha_m)/2)`; for the URA it picks up the
//! row offset, `d^2 = (m - m')^2 d_x^2 + chord_yz^2`. The azimuthal
//! odd-order terms of the underlying integral are purely imaginary for the
//! ULA and empirically negligible for the URA; the [`crate::oracle`] module
//! quantifies both claims.

use std::io::Write;

use crate::error::{Error, Result};
use crate::geometry::{ArchedUlaGeometry, ArchedUraGeometry, Curvature};
use crate::numerics::sinc_normalized;
use crate::scalar::Real;

/// Largest URA element count materialized as a dense matrix (128 MiB of
/// `f64` entries at the guard).
pub const MAX_DENSE_ELEMENTS: usize = 16384;

/// Which construction produced a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    ClosedUla,
    ClosedUra,
}

/// Dense real symmetric correlation matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix<T> {
    dim: usize,
    kind: MatrixKind,
    values: Vec<T>, // row-major
}

impl<T: Real> CorrelationMatrix<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    /// Row-major entries.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        assert!(row < self.dim && col < self.dim, "matrix index out of range");
        self.values[row * self.dim + col]
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.values[i * self.dim + i]).fold(T::zero(), |a, b| a + b)
    }

    /// Writes the matrix as `row,col,value` CSV (shortest round-trip number
    /// formatting, LF line endings).
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "row,col,value")?;
        for row in 0..self.dim {
            for col in 0..self.dim {
                writeln!(out, "{},{},{}", row, col, self.values[row * self.dim + col])?;
            }
        }
        Ok(())
    }
}

/// Chord between arc positions separated by `steps` element spacings,
/// shared by the ULA and URA entry formulas so degenerate cases agree
/// bit-for-bit.
fn arc_chord<T: Real>(g: &ArchedUlaGeometry<T>, steps: usize) -> T {
    let s = T::from_count(steps);
    match g.curvature() {
        Curvature::Planar => s * g.element_spacing(),
        Curvature::Curved { radius } => {
            let half_angle = s * g.angle_step() / T::lit(2.0);
            (T::lit(2.0) * radius * half_angle.sin()).abs()
        }
    }
}

/// Closed-form correlation of ULA elements `m` and `n` (zero-based):
/// `sinc(2 * chord / lambda)` with the chord `2 R sin((alpha_n - alpha_m)/2)`
/// (straight-line separation in planar mode).
pub fn corr_ula_entry<T: Real>(g: &ArchedUlaGeometry<T>, m: usize, n: usize) -> T {
    assert!(m < g.n_elements() && n < g.n_elements(), "element index out of range");
    let chord = arc_chord(g, m.max(n) - m.min(n));
    sinc_normalized(T::lit(2.0) * chord / g.wavelength())
}

/// Full `N x N` closed-form ULA matrix. Entries depend only on `n - m`, so
/// the matrix is Toeplitz and assembled from `N` distinct values.
pub fn corr_ula_matrix<T: Real>(g: &ArchedUlaGeometry<T>) -> CorrelationMatrix<T> {
    let n = g.n_elements();
    let lags: Vec<T> = (0..n).map(|k| corr_ula_entry(g, 0, k)).collect();
    let mut values = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            values[i * n + j] = lags[i.max(j) - i.min(j)];
        }
    }
    CorrelationMatrix { dim: n, kind: MatrixKind::ClosedUla, values }
}

/// Closed-form correlation of URA elements `(m, n)` and `(m', n')`:
/// `sinc(2 * d / lambda)` with
/// `d^2 = (m - m')^2 d_x^2 + chord_yz(n - n')^2`, equivalently
/// `(lambda / (2 pi d)) sin(2 pi d / lambda)` in terms of the `(D, E)` pair
/// coefficients (`d = sqrt(D^2 + E^2)`).
pub fn corr_ura_entry<T: Real>(
    g: &ArchedUraGeometry<T>,
    a: (usize, usize),
    b: (usize, usize),
) -> T {
    assert!(a.0 < g.rows() && b.0 < g.rows(), "row index out of range");
    let chord_yz = arc_chord(g.arc(), a.1.max(b.1) - a.1.min(b.1));
    let row_offset = T::from_count(a.0.max(b.0) - a.0.min(b.0)) * g.row_spacing();
    let separation = if a.0 == b.0 { chord_yz } else { row_offset.hypot(chord_yz) };
    sinc_normalized(T::lit(2.0) * separation / g.wavelength())
}

/// Full `(M N) x (M N)` closed-form URA matrix in row-major element order.
/// Entries depend only on `(|m - m'|, |n - n'|)`, so the matrix is assembled
/// from an `M x N` table of distinct values.
pub fn corr_ura_matrix<T: Real>(g: &ArchedUraGeometry<T>) -> Result<CorrelationMatrix<T>> {
    let total = g.total_elements();
    if total > MAX_DENSE_ELEMENTS {
        return Err(Error::Resource(format!(
            "URA with {total} elements exceeds the dense-matrix guard of {MAX_DENSE_ELEMENTS}"
        )));
    }
    let (rows, per_arc) = (g.rows(), g.per_arc());
    let mut lags = vec![T::zero(); rows * per_arc];
    for dm in 0..rows {
        for dn in 0..per_arc {
            lags[dm * per_arc + dn] = corr_ura_entry(g, (0, 0), (dm, dn));
        }
    }
    let mut values = vec![T::zero(); total * total];
    for i in 0..total {
        let (mi, ni) = g.element_pair(i);
        for j in 0..total {
            let (mj, nj) = g.element_pair(j);
            let dm = mi.max(mj) - mi.min(mj);
            let dn = ni.max(nj) - ni.min(nj);
            values[i * total + j] = lags[dm * per_arc + dn];
        }
    }
    Ok(CorrelationMatrix { dim: total, kind: MatrixKind::ClosedUra, values })
}
