//! Eigenvalue spectra and degrees-of-freedom metrics for correlation
//! matrices.
//!
//! The number of dominant eigenvalues of the spatial correlation matrix is
//! the number of independent spatial channels the array supports. Two
//! metrics are reported: a relative-threshold count (eigenvalues above
//! `tau * lambda_max`) and the effective rank (exponential of the spectral
//! entropy), together with the analytic aperture asymptotes `2 L / lambda`
//! (linear) and `pi L^2 / lambda^2` (square).

use std::collections::BTreeMap;
use std::io::Write;

use nalgebra::{DMatrix, RealField};
use serde::{Deserialize, Serialize};

use crate::correlation::CorrelationMatrix;
use crate::error::{Error, Result};
use crate::oracle::HermitianCorrelation;
use crate::scalar::Real;

/// Relative floor for negative eigenvalues: anything at or above
/// `-PSD_TOLERANCE * lambda_max` is treated as rounding noise and clipped,
/// anything below is a genuine violation.
pub const PSD_TOLERANCE: f64 = 1e-8;

/// Maximum tolerated asymmetry of a spectrum input.
const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Eigenvalues in non-increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum<T> {
    values: Vec<T>,
    dim: usize,
}

impl<T: Real> EigenSpectrum<T> {
    /// Builds a spectrum from raw eigenvalues (sorted internally).
    pub fn from_values(mut values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("spectrum must contain at least one value".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("spectrum contains non-finite values".into()));
        }
        values.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
        let dim = values.len();
        Ok(Self { values, dim })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max(&self) -> T {
        self.values[0]
    }

    pub fn min(&self) -> T {
        self.values[self.dim - 1]
    }

    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |a, b| a + *b)
    }

    /// Writes `index,eigenvalue` CSV, index starting at 1, descending values.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "index,eigenvalue")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(out, "{},{}", i + 1, v)?;
        }
        Ok(())
    }
}

/// All eigenvalues of a closed-form correlation matrix, descending.
///
/// The input must be symmetric within `1e-10`; it is symmetrized as
/// `(R + R^T) / 2` before decomposition so the solver sees an exactly
/// symmetric matrix. The decomposition runs as one deterministic task.
pub fn eigen_spectrum<T>(matrix: &CorrelationMatrix<T>) -> Result<EigenSpectrum<T>>
where
    T: Real + RealField,
{
    let n = matrix.dim();
    let values = matrix.values();
    if values.iter().any(|v| !num_traits::Float::is_finite(*v)) {
        return Err(Error::Numeric("correlation matrix contains non-finite entries".into()));
    }
    let tol = T::lit(SYMMETRY_TOLERANCE);
    let mut sym = DMatrix::<T>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let a = values[i * n + j];
            let b = values[j * n + i];
            if num_traits::Float::abs(a - b) > tol {
                return Err(Error::Domain(format!(
                    "matrix is not symmetric at ({i}, {j}): {a} vs {b}"
                )));
            }
            sym[(i, j)] = (a + b) / T::lit(2.0);
        }
    }
    let eigen = sym.symmetric_eigenvalues();
    EigenSpectrum::from_values(eigen.iter().copied().collect())
}

/// All eigenvalues of a Hermitian oracle matrix, descending.
///
/// Uses the real embedding `[[X, -Y], [Y, X]]` of `H = X + jY`, whose
/// spectrum is that of `H` with every eigenvalue doubled; every second value
/// of the sorted embedding is returned.
pub fn eigen_spectrum_hermitian<T>(matrix: &HermitianCorrelation<T>) -> Result<EigenSpectrum<T>>
where
    T: Real + RealField,
{
    let n = matrix.dim();
    let mut embedded = DMatrix::<T>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let v = matrix.get(i, j);
            let h = matrix.get(j, i);
            if !num_traits::Float::is_finite(v.re) || !num_traits::Float::is_finite(v.im) {
                return Err(Error::Numeric("oracle matrix contains non-finite entries".into()));
            }
            let tol = T::lit(SYMMETRY_TOLERANCE);
            if num_traits::Float::abs(v.re - h.re) > tol
                || num_traits::Float::abs(v.im + h.im) > tol
            {
                return Err(Error::Domain(format!("matrix is not Hermitian at ({i}, {j})")));
            }
            let re = (v.re + h.re) / T::lit(2.0);
            let im = (v.im - h.im) / T::lit(2.0);
            embedded[(i, j)] = re;
            embedded[(n + i, n + j)] = re;
            embedded[(i, n + j)] = -im;
            embedded[(n + i, j)] = im;
        }
    }
    let eigen = embedded.symmetric_eigenvalues();
    let mut all: Vec<T> = eigen.iter().copied().collect();
    all.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    let values: Vec<T> = all.into_iter().step_by(2).collect();
    EigenSpectrum::from_values(values)
}

/// Number of eigenvalues at or above `tau * lambda_max`, `0 < tau < 1`.
pub fn dof_threshold<T: Real>(spectrum: &EigenSpectrum<T>, tau: T) -> Result<usize> {
    if !(tau > T::zero() && tau < T::one()) {
        return Err(Error::Domain(format!("threshold must lie in (0, 1), got {tau}")));
    }
    let peak = spectrum.max();
    if !(peak > T::zero()) {
        return Err(Error::Domain("spectrum has no positive eigenvalues".into()));
    }
    let cut = tau * peak;
    Ok(spectrum.values().iter().take_while(|v| **v >= cut).count())
}

/// Effective rank: exponential of the entropy of the normalized spectrum.
///
/// Negative eigenvalues within `-PSD_TOLERANCE * lambda_max` are clipped to
/// zero; anything lower aborts with a PSD violation.
pub fn effective_rank<T: Real>(spectrum: &EigenSpectrum<T>) -> Result<T> {
    let peak = spectrum.max();
    if !(peak > T::zero()) {
        return Err(Error::Domain("spectrum has no positive eigenvalues".into()));
    }
    let floor = -T::lit(PSD_TOLERANCE) * peak;
    let mut clipped = Vec::with_capacity(spectrum.dim());
    for &v in spectrum.values() {
        if v < floor {
            return Err(Error::PsdViolation {
                eigenvalue: v.as_f64(),
                floor: floor.as_f64(),
            });
        }
        clipped.push(v.max(T::zero()));
    }
    let total: T = clipped.iter().fold(T::zero(), |a, b| a + *b);
    if !(total > T::zero()) {
        return Err(Error::Domain("spectrum sums to zero".into()));
    }
    let mut entropy = T::zero();
    for v in clipped {
        if v > T::zero() {
            let p = v / total;
            entropy -= p * p.ln();
        }
    }
    Ok(entropy.exp())
}

/// Asymptotic DoF of a linear aperture of length `arc_length`: `2 L / lambda`.
pub fn asymptotic_dof_ula<T: Real>(arc_length: T, wavelength: T) -> Result<T> {
    check_positive(arc_length, wavelength)?;
    Ok(T::lit(2.0) * arc_length / wavelength)
}

/// Asymptotic DoF of a square aperture of side `arc_length`:
/// `pi L^2 / lambda^2`.
pub fn asymptotic_dof_ura<T: Real>(arc_length: T, wavelength: T) -> Result<T> {
    check_positive(arc_length, wavelength)?;
    Ok(T::PI() * arc_length * arc_length / (wavelength * wavelength))
}

fn check_positive<T: Real>(l: T, lambda: T) -> Result<()> {
    if !(l > T::zero()) || !(lambda > T::zero()) {
        return Err(Error::Domain(format!(
            "aperture and wavelength must be positive, got {l} and {lambda}"
        )));
    }
    Ok(())
}

/// Degrees-of-freedom summary for one spectrum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DofReport {
    pub beta: f64,
    /// Threshold (formatted in scientific notation) -> eigenvalue count.
    pub threshold_counts: BTreeMap<String, usize>,
    pub effective_rank: f64,
    pub asymptote: f64,
}

/// Canonical key for a relative threshold, e.g. `1e-2`.
pub fn threshold_key(tau: f64) -> String {
    format!("{tau:e}")
}

/// Assembles the DoF report for a spectrum at bend angle `beta`.
pub fn dof_report<T: Real>(
    spectrum: &EigenSpectrum<T>,
    thresholds: &[f64],
    asymptote: f64,
    beta: f64,
) -> Result<DofReport> {
    let mut threshold_counts = BTreeMap::new();
    for &tau in thresholds {
        let count = dof_threshold(spectrum, T::lit(tau))?;
        threshold_counts.insert(threshold_key(tau), count);
    }
    Ok(DofReport {
        beta,
        threshold_counts,
        effective_rank: effective_rank(spectrum)?.as_f64(),
        asymptote,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::{corr_ula_matrix, corr_ura_matrix};
    use crate::geometry::{ArchedUlaGeometry, ArchedUraGeometry, ArrayGeometry};
    use crate::oracle::{oracle_matrix, OracleSettings};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    /// Independent cyclic-Jacobi eigensolver used as a test oracle.
    fn jacobi_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
        let mut m = a.to_vec();
        for _sweep in 0..100 {
            let mut off = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += m[i * n + j] * m[i * n + j];
                }
            }
            if off < 1e-26 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = m[p * n + q];
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = m[k * n + p];
                        let akq = m[k * n + q];
                        m[k * n + p] = c * akp - s * akq;
                        m[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = m[p * n + k];
                        let aqk = m[q * n + k];
                        m[p * n + k] = c * apk - s * aqk;
                        m[q * n + k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut eig: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
        eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
        eig
    }

    #[test]
    fn identity_matrix_spectrum() {
        let lambda = 0.1;
        // d = lambda/2 planar ULA: the correlation matrix is the identity.
        let g = ArchedUlaGeometry::<f64>::new(5, 2.0 * lambda, 0.0, lambda).unwrap();
        let s = eigen_spectrum(&corr_ula_matrix(&g)).unwrap();
        assert_eq!(s.dim(), 5);
        for v in s.values() {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn two_by_two_analytic_spectrum() {
        let g = ArchedUlaGeometry::<f64>::new(2, 0.04, FRAC_PI_4, 0.1).unwrap();
        let m = corr_ula_matrix(&g);
        let a = m.get(0, 1);
        let s = eigen_spectrum(&m).unwrap();
        assert_abs_diff_eq!(s.values()[0], 1.0 + a.abs(), epsilon = 1e-12);
        assert_abs_diff_eq!(s.values()[1], 1.0 - a.abs(), epsilon = 1e-12);
    }

    #[test]
    fn spectrum_matches_jacobi_oracle() {
        let g = ArchedUlaGeometry::<f64>::new(9, 0.12, 1.1, 0.021).unwrap();
        let m = corr_ula_matrix(&g);
        let s = eigen_spectrum(&m).unwrap();
        let reference = jacobi_eigenvalues(m.values(), 9);
        for (a, b) in s.values().iter().zip(&reference) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-10);
        }
    }

    #[test]
    fn eigenvalue_sum_equals_trace() {
        let g = ArchedUraGeometry::<f64>::new(4, 6, 0.05, 0.2, 1.0, 0.03).unwrap();
        let m = corr_ura_matrix(&g).unwrap();
        let s = eigen_spectrum(&m).unwrap();
        let dim = m.dim() as f64;
        assert!((s.sum() - dim).abs() <= 1e-8 * dim);
    }

    #[test]
    fn hermitian_oracle_spectrum_is_psd() {
        let lambda = 0.05;
        let g = ArchedUlaGeometry::<f64>::new(6, 3.0 * lambda, 1.0, lambda).unwrap();
        let quick = OracleSettings { order: 64, tolerance: 1e-9, max_doublings: 3 };
        let h = oracle_matrix(&ArrayGeometry::Ula(g), &quick).unwrap();
        let s = eigen_spectrum_hermitian(&h).unwrap();
        assert_eq!(s.dim(), 6);
        assert!((s.sum() - 6.0).abs() < 1e-6);
        assert!(s.min() >= -PSD_TOLERANCE * s.max());
    }

    #[test]
    fn hermitian_spectrum_matches_real_path_for_real_input() {
        // A planar geometry yields a real oracle matrix, so the Hermitian
        // path must agree with the real symmetric one.
        let lambda = 0.04;
        let g = ArchedUlaGeometry::<f64>::new(5, 1.3 * lambda, 0.0, lambda).unwrap();
        let quick = OracleSettings { order: 64, tolerance: 1e-9, max_doublings: 3 };
        let h = oracle_matrix(&ArrayGeometry::Ula(g.clone()), &quick).unwrap();
        let hs = eigen_spectrum_hermitian(&h).unwrap();
        let rs = eigen_spectrum(&corr_ula_matrix(&g)).unwrap();
        for (a, b) in hs.values().iter().zip(rs.values()) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-7);
        }
    }

    #[test]
    fn dof_threshold_examples() {
        let identity = EigenSpectrum::from_values(vec![1.0f64; 5]).unwrap();
        assert_eq!(dof_threshold(&identity, 0.5).unwrap(), 5);

        let s = EigenSpectrum::from_values(vec![2.0, 1.0, 0.001]).unwrap();
        assert_eq!(dof_threshold(&s, 0.01).unwrap(), 2);

        assert!(dof_threshold(&s, 0.0).is_err());
        assert!(dof_threshold(&s, 1.0).is_err());
    }

    #[test]
    fn dof_threshold_monotone_in_tau() {
        let s = EigenSpectrum::from_values(vec![5.0, 3.0, 1.0, 0.5, 0.01, 0.002]).unwrap();
        let mut last = usize::MAX;
        for tau in [1e-3, 1e-2, 0.1, 0.5, 0.9] {
            let c = dof_threshold(&s, tau).unwrap();
            assert!(c <= last);
            last = c;
        }
    }

    #[test]
    fn effective_rank_examples() {
        let identity = EigenSpectrum::from_values(vec![1.0f64; 7]).unwrap();
        assert_abs_diff_eq!(effective_rank(&identity).unwrap(), 7.0, epsilon = 1e-12);

        let point = EigenSpectrum::from_values(vec![1.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(effective_rank(&point).unwrap(), 1.0, epsilon = 1e-12);

        let two = EigenSpectrum::from_values(vec![1.0, 1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(effective_rank(&two).unwrap(), 2.0, epsilon = 1e-12);

        // Small negatives are clipped, large ones abort.
        let noisy = EigenSpectrum::from_values(vec![1.0, 0.5, -1e-9]).unwrap();
        assert!(effective_rank(&noisy).is_ok());
        let broken = EigenSpectrum::from_values(vec![1.0, 0.5, -1e-3]).unwrap();
        assert!(matches!(effective_rank(&broken), Err(Error::PsdViolation { .. })));
    }

    #[test]
    fn asymptote_values() {
        assert_abs_diff_eq!(
            asymptotic_dof_ula(0.3142f64, 0.003).unwrap(),
            209.46666666666667,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(asymptotic_dof_ula(1.0f64, 1.0).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(asymptotic_dof_ula(0.15f64, 0.003).unwrap(), 100.0, epsilon = 1e-10);

        assert_abs_diff_eq!(
            asymptotic_dof_ura(0.0393f64, 0.003).unwrap(),
            std::f64::consts::PI * (0.0393f64 / 0.003).powi(2),
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            asymptotic_dof_ura(1.0f64, 1.0).unwrap(),
            std::f64::consts::PI,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            asymptotic_dof_ura(2.0f64, 1.0).unwrap(),
            4.0 * std::f64::consts::PI,
            epsilon = 1e-15
        );
        assert!(asymptotic_dof_ula(0.0f64, 1.0).is_err());
    }

    #[test]
    fn dof_report_assembles() {
        let s = EigenSpectrum::from_values(vec![4.0, 2.0, 0.5, 0.001]).unwrap();
        let report = dof_report(&s, &[0.1, 0.01, 0.001], 3.5, 0.25).unwrap();
        assert_eq!(report.threshold_counts["1e-1"], 3);
        assert_eq!(report.threshold_counts["1e-2"], 3);
        assert_eq!(report.threshold_counts["1e-3"], 3);
        assert_eq!(report.beta, 0.25);
        assert_eq!(report.asymptote, 3.5);
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("effective_rank"));
    }

    #[test]
    fn spectrum_csv_format() {
        let s = EigenSpectrum::from_values(vec![0.25, 1.0]).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "index,eigenvalue\n1,1\n2,0.25\n");
    }

    #[test]
    fn rejects_asymmetric_and_non_finite_input() {
        let bad = EigenSpectrum::<f64>::from_values(vec![]);
        assert!(bad.is_err());
        let nan = EigenSpectrum::from_values(vec![1.0, f64::NAN]);
        assert!(nan.is_err());
    }
}
