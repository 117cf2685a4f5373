//! Brute-force evaluation of the correlation double integral and the
//! odd-order residual series; ground truth for the closed forms.
//!
//! The correlation entry is `int int S(theta) e^{j phase} dtheta dphi` over
//! the half-space `[0, pi]^2` with the isotropic density
//! `S = sin(theta) / (2 pi)`. Quadrature orders double until two successive
//! tensor-product estimates agree.
//!
//! Sign conventions (each matrix is Hermitian, so only the sign of the
//! imaginary part is affected): the ULA entry `(m, n)` integrates
//! `e^{+j delta_mn}` with `delta_mn` the phase of element `n` minus element
//! `m`; the URA entry integrates
//! `e^{-j (2 pi / lambda)(A cos phi + B sin phi + C)}` in terms of the pair
//! decomposition, whose sign choices make a same-arc URA entry the complex
//! conjugate of the corresponding ULA entry.

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlation::{corr_ula_entry, corr_ura_entry};
use crate::error::{Error, Result};
use crate::geometry::{ArchedUlaGeometry, ArchedUraGeometry, ArrayGeometry};
use crate::numerics::{
    bessel_j_sequence, gauss_legendre, integrate_2d, QuadratureRule, MAX_QUADRATURE_ORDER,
};
use crate::scalar::Real;
use crate::wavefield::{ura_abc_coefficients, Direction};

/// Convergence controls for the oracle quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings<T> {
    /// Initial Gauss-Legendre order per axis.
    pub order: usize,
    /// Stop once successive order-doubled estimates differ by less than this.
    pub tolerance: T,
    /// Number of allowed doublings past the initial order.
    pub max_doublings: u32,
}

impl<T: Real> Default for OracleSettings<T> {
    fn default() -> Self {
        Self { order: 256, tolerance: T::lit(1e-10), max_doublings: 3 }
    }
}

impl<T: Real> OracleSettings<T> {
    fn check(&self) -> Result<()> {
        if self.order < 1 || self.order > MAX_QUADRATURE_ORDER {
            return Err(Error::Domain(format!(
                "oracle order {} outside 1..={MAX_QUADRATURE_ORDER}",
                self.order
            )));
        }
        if !(self.tolerance >= T::lit(1e-14)) {
            return Err(Error::Domain(format!(
                "oracle tolerance {} must be at least 1e-14",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Half-space isotropic scattering density `sin(theta) / (2 pi)`.
pub fn scattering_density<T: Real>(dir: &Direction<T>) -> T {
    dir.theta().sin() / (T::lit(2.0) * T::PI())
}

/// Doubles the order until two successive estimates agree within tolerance;
/// returns the converged estimate and the order it was reached at.
fn integrate_until_converged<T, F>(f: F, settings: &OracleSettings<T>) -> Result<(Complex<T>, usize)>
where
    T: Real,
    F: Fn(T, T) -> Complex<T>,
{
    settings.check()?;
    let full = (T::zero(), T::PI());
    let mut order = settings.order;
    let mut previous: Option<Complex<T>> = None;
    for step in 0..=settings.max_doublings {
        let rule: QuadratureRule<T> = gauss_legendre(order)?;
        let estimate = integrate_2d(&f, full, full, &rule)?;
        if let Some(prev) = previous {
            let delta = (estimate - prev).norm();
            if delta < settings.tolerance {
                return Ok((estimate, order));
            }
            if step == settings.max_doublings || order * 2 > MAX_QUADRATURE_ORDER {
                return Err(Error::QuadratureNotConverged {
                    order,
                    prev_re: prev.re.as_f64(),
                    prev_im: prev.im.as_f64(),
                    last_re: estimate.re.as_f64(),
                    last_im: estimate.im.as_f64(),
                    delta: delta.as_f64(),
                    tolerance: settings.tolerance.as_f64(),
                });
            }
        }
        previous = Some(estimate);
        order *= 2;
    }
    unreachable!("loop either converges or errors out")
}

/// Oracle correlation entry for ULA elements `m`, `n`, together with the
/// quadrature order it converged at.
pub fn oracle_entry_ula_converged<T: Real>(
    g: &ArchedUlaGeometry<T>,
    m: usize,
    n: usize,
    settings: &OracleSettings<T>,
) -> Result<(Complex<T>, usize)> {
    if m >= g.n_elements() || n >= g.n_elements() {
        return Err(Error::Domain(format!("element pair ({m}, {n}) out of range")));
    }
    let k = T::lit(2.0) * T::PI() / g.wavelength();
    let pm = g.position(m);
    let pn = g.position(n);
    let py = k * (pn.y - pm.y);
    let pz = k * (pn.z - pm.z);
    let two_pi = T::lit(2.0) * T::PI();
    integrate_until_converged(
        move |theta: T, phi: T| {
            let phase = py * theta.sin() * phi.sin() + pz * theta.cos();
            Complex::from_polar(theta.sin() / two_pi, phase)
        },
        settings,
    )
}

/// Oracle correlation entry for ULA elements `m`, `n` (zero-based).
pub fn oracle_entry_ula<T: Real>(
    g: &ArchedUlaGeometry<T>,
    m: usize,
    n: usize,
    settings: &OracleSettings<T>,
) -> Result<Complex<T>> {
    oracle_entry_ula_converged(g, m, n, settings).map(|(v, _)| v)
}

/// Oracle correlation entry for URA elements `a = (m, n)`, `b = (m', n')`,
/// with the converged quadrature order.
pub fn oracle_entry_ura_converged<T: Real>(
    g: &ArchedUraGeometry<T>,
    a: (usize, usize),
    b: (usize, usize),
    settings: &OracleSettings<T>,
) -> Result<(Complex<T>, usize)> {
    let (a_hat, b_hat, c_hat) = ura_abc_coefficients(g, a, b)?;
    let k = T::lit(2.0) * T::PI() / g.wavelength();
    let (ka, kb, kc) = (k * a_hat, k * b_hat, k * c_hat);
    let two_pi = T::lit(2.0) * T::PI();
    integrate_until_converged(
        move |theta: T, phi: T| {
            let phase = -((ka * phi.cos() + kb * phi.sin()) * theta.sin() + kc * theta.cos());
            Complex::from_polar(theta.sin() / two_pi, phase)
        },
        settings,
    )
}

/// Oracle correlation entry for URA elements `a`, `b`.
pub fn oracle_entry_ura<T: Real>(
    g: &ArchedUraGeometry<T>,
    a: (usize, usize),
    b: (usize, usize),
    settings: &OracleSettings<T>,
) -> Result<Complex<T>> {
    oracle_entry_ura_converged(g, a, b, settings).map(|(v, _)| v)
}

/// Truncated odd-order residual series for a ULA pair.
#[derive(Debug, Clone, PartialEq)]
pub struct OddOrderSeries<T> {
    /// Estimate of the oracle's imaginary part: `closed + j * value`
    /// approximates the oracle entry.
    pub value: T,
    /// Signed contribution of each odd order `k = 1, 3, 5, ...`.
    pub terms: Vec<T>,
    /// Whether the magnitude of the final term fell below tolerance.
    pub converged: bool,
}

/// Sums the odd-order azimuth terms of the correlation integral for ULA
/// elements `m`, `n` up to order `k_max` (odd).
///
/// Each odd order contributes `(2 / (k pi)) * T_k` with
/// `T_k = int_0^pi sin(theta) cos(Q cos theta) J_k(P sin theta) dtheta`,
/// where `P` and `Q` are the azimuthal and vertical phase spans of the pair.
/// The factor 2 collects the two symmetric halves of the expansion; each
/// `T_k` is real, so the sum is exactly the imaginary part the zero-order
/// closed form discards.
pub fn odd_term_series_ula<T: Real>(
    g: &ArchedUlaGeometry<T>,
    m: usize,
    n: usize,
    k_max: u32,
    settings: &OracleSettings<T>,
) -> Result<OddOrderSeries<T>> {
    if k_max.is_multiple_of(2) || k_max > 199 {
        return Err(Error::Domain(format!("k_max must be odd and <= 199, got {k_max}")));
    }
    if m >= g.n_elements() || n >= g.n_elements() {
        return Err(Error::Domain(format!("element pair ({m}, {n}) out of range")));
    }
    settings.check()?;

    let k = T::lit(2.0) * T::PI() / g.wavelength();
    let pm = g.position(m);
    let pn = g.position(n);
    let span_y = k * (pn.y - pm.y); // P
    let span_z = k * (pn.z - pm.z); // Q

    let n_terms = (k_max as usize).div_ceil(2);
    if span_y == T::zero() {
        // No azimuthal dependence: every odd order vanishes identically.
        return Ok(OddOrderSeries {
            value: T::zero(),
            terms: vec![T::zero(); n_terms],
            converged: true,
        });
    }

    let mut order = settings.order;
    let mut previous: Option<Vec<T>> = None;
    for step in 0..=settings.max_doublings {
        let terms = odd_terms_at_order(span_y, span_z, k_max, order)?;
        if let Some(prev) = previous {
            let delta = terms
                .iter()
                .zip(&prev)
                .map(|(a, b)| (*a - *b).abs())
                .fold(T::zero(), T::max);
            if delta < settings.tolerance {
                let value = terms.iter().fold(T::zero(), |acc, t| acc + *t);
                let converged = terms.last().is_none_or(|t| t.abs() <= settings.tolerance);
                return Ok(OddOrderSeries { value, terms, converged });
            }
            if step == settings.max_doublings || order * 2 > MAX_QUADRATURE_ORDER {
                return Err(Error::Numeric(format!(
                    "odd-order series quadrature did not converge at order {order}"
                )));
            }
        }
        previous = Some(terms);
        order *= 2;
    }
    unreachable!("loop either converges or errors out")
}

/// All odd-order contributions at a fixed quadrature order: one Bessel
/// sequence per node covers every order at once.
fn odd_terms_at_order<T: Real>(span_y: T, span_z: T, k_max: u32, order: usize) -> Result<Vec<T>> {
    let rule: QuadratureRule<T> = gauss_legendre(order)?;
    let half_pi = T::PI() / T::lit(2.0);
    let n_terms = (k_max as usize).div_ceil(2);
    let mut integrals = vec![T::zero(); n_terms];
    for (node, weight) in rule.nodes().iter().zip(rule.weights()) {
        let theta = half_pi + half_pi * *node; // map [-1, 1] -> [0, pi]
        let seq = bessel_j_sequence(k_max, span_y * theta.sin())?;
        let common = *weight * theta.sin() * (span_z * theta.cos()).cos();
        for (t, integral) in integrals.iter_mut().enumerate() {
            *integral += common * seq[2 * t + 1];
        }
    }
    let two_over_pi = T::lit(2.0) / T::PI();
    Ok(integrals
        .iter()
        .enumerate()
        .map(|(t, integral)| {
            // half-width of the theta map times 2/(k pi)
            *integral * half_pi * two_over_pi / T::from_count(2 * t + 1)
        })
        .collect())
}

/// Dense Hermitian oracle correlation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianCorrelation<T> {
    dim: usize,
    values: Vec<Complex<T>>, // row-major
}

/// Largest element count for which the full oracle matrix is computed.
pub const MAX_ORACLE_ELEMENTS: usize = 256;

impl<T: Real> HermitianCorrelation<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        assert!(row < self.dim && col < self.dim, "matrix index out of range");
        self.values[row * self.dim + col]
    }
}

/// Computes every oracle entry of the array's correlation matrix.
pub fn oracle_matrix<T: Real>(
    geom: &ArrayGeometry<T>,
    settings: &OracleSettings<T>,
) -> Result<HermitianCorrelation<T>> {
    let dim = geom.element_count();
    if dim > MAX_ORACLE_ELEMENTS {
        return Err(Error::Resource(format!(
            "oracle matrix for {dim} elements exceeds the guard of {MAX_ORACLE_ELEMENTS}"
        )));
    }
    let pairs: Vec<(usize, usize)> =
        (0..dim).flat_map(|i| (i..dim).map(move |j| (i, j))).collect();
    let upper: Vec<Complex<T>> = pairs
        .par_iter()
        .map(|&(i, j)| oracle_pair_entry(geom, i, j, settings).map(|(v, _)| v))
        .collect::<Result<_>>()?;
    let mut values = vec![Complex::new(T::zero(), T::zero()); dim * dim];
    for (&(i, j), &v) in pairs.iter().zip(&upper) {
        values[i * dim + j] = v;
        values[j * dim + i] = v.conj();
    }
    Ok(HermitianCorrelation { dim, values })
}

fn oracle_pair_entry<T: Real>(
    geom: &ArrayGeometry<T>,
    i: usize,
    j: usize,
    settings: &OracleSettings<T>,
) -> Result<(Complex<T>, usize)> {
    match geom {
        ArrayGeometry::Ula(g) => oracle_entry_ula_converged(g, i, j, settings),
        ArrayGeometry::Ura(g) => {
            oracle_entry_ura_converged(g, g.element_pair(i), g.element_pair(j), settings)
        }
    }
}

fn closed_pair_entry<T: Real>(geom: &ArrayGeometry<T>, i: usize, j: usize) -> T {
    match geom {
        ArrayGeometry::Ula(g) => corr_ula_entry(g, i, j),
        ArrayGeometry::Ura(g) => corr_ura_entry(g, g.element_pair(i), g.element_pair(j)),
    }
}

/// Closed-form vs oracle comparison for one element pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairRecord {
    pub i: usize,
    pub j: usize,
    pub closed: f64,
    pub oracle_re: f64,
    pub oracle_im: f64,
    pub quadrature_order: usize,
}

/// Geometry echo carried inside a [`ValidationReport`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeometrySummary {
    pub kind: String,
    pub rows: usize,
    pub per_arc: usize,
    pub arc_length_m: f64,
    pub bend_angle_rad: f64,
    pub wavelength_m: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row_spacing_m: Option<f64>,
}

impl GeometrySummary {
    fn from_geometry<T: Real>(geom: &ArrayGeometry<T>) -> Self {
        match geom {
            ArrayGeometry::Ula(g) => Self {
                kind: "ula".into(),
                rows: 1,
                per_arc: g.n_elements(),
                arc_length_m: g.arc_length().as_f64(),
                bend_angle_rad: g.bend_angle().as_f64(),
                wavelength_m: g.wavelength().as_f64(),
                row_spacing_m: None,
            },
            ArrayGeometry::Ura(g) => Self {
                kind: "ura".into(),
                rows: g.rows(),
                per_arc: g.per_arc(),
                arc_length_m: g.arc_length().as_f64(),
                bend_angle_rad: g.bend_angle().as_f64(),
                wavelength_m: g.wavelength().as_f64(),
                row_spacing_m: Some(g.row_spacing().as_f64()),
            },
        }
    }
}

/// Closed-form vs oracle comparison over a set of element pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub geometry: GeometrySummary,
    pub pairs: usize,
    pub max_abs_real_error: f64,
    pub max_abs_imag_part: f64,
    pub quadrature_order: usize,
    pub seed: u64,
    pub sign_convention: String,
    pub entries: Vec<PairRecord>,
}

const SIGN_CONVENTION: &str = "ULA entry (m,n) integrates exp(+j*delta_mn) (phase of element n \
minus element m); URA entry integrates exp(-j*(2pi/lambda)*(A cos(phi) + B sin(phi) + C)); \
same-arc URA entries are the complex conjugate of the corresponding ULA entries";

/// Compares closed-form entries against the oracle.
///
/// Uses every unordered pair when there are at most 256 of them, otherwise
/// `pair_samples` pairs drawn with a seeded generator.
pub fn validate<T: Real>(
    geom: &ArrayGeometry<T>,
    pair_samples: usize,
    seed: u64,
    settings: &OracleSettings<T>,
) -> Result<ValidationReport> {
    if pair_samples < 1 {
        return Err(Error::Domain("pair sample count must be at least 1".into()));
    }
    settings.check()?;
    let dim = geom.element_count();
    let total_pairs = dim * (dim + 1) / 2;
    let pairs: Vec<(usize, usize)> = if total_pairs <= 256 {
        (0..dim).flat_map(|i| (i..dim).map(move |j| (i, j))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..pair_samples)
            .map(|_| {
                let a = rng.gen_range(0..dim);
                let b = rng.gen_range(0..dim);
                (a.min(b), a.max(b))
            })
            .collect()
    };

    let entries: Vec<PairRecord> = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<PairRecord> {
            let closed = closed_pair_entry(geom, i, j);
            let (value, order) = oracle_pair_entry(geom, i, j, settings)
                .map_err(|e| Error::Numeric(format!("pair ({i}, {j}): {e}")))?;
            Ok(PairRecord {
                i,
                j,
                closed: closed.as_f64(),
                oracle_re: value.re.as_f64(),
                oracle_im: value.im.as_f64(),
                quadrature_order: order,
            })
        })
        .collect::<Result<_>>()?;

    let max_abs_real_error = entries
        .iter()
        .map(|r| (r.closed - r.oracle_re).abs())
        .fold(0.0f64, f64::max);
    let max_abs_imag_part = entries.iter().map(|r| r.oracle_im.abs()).fold(0.0f64, f64::max);
    let quadrature_order = entries.iter().map(|r| r.quadrature_order).max().unwrap_or(0);

    Ok(ValidationReport {
        geometry: GeometrySummary::from_geometry(geom),
        pairs: entries.len(),
        max_abs_real_error,
        max_abs_imag_part,
        quadrature_order,
        seed,
        sign_convention: SIGN_CONVENTION.into(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn settings() -> OracleSettings<f64> {
        OracleSettings::default()
    }

    fn test_ula(beta: f64) -> ArchedUlaGeometry<f64> {
        // 8 elements, arc four wavelengths long
        let lambda = 0.02;
        ArchedUlaGeometry::new(8, 4.0 * lambda, beta, lambda).unwrap()
    }

    #[test]
    fn density_values() {
        let d = Direction::new(FRAC_PI_2, 0.3).unwrap();
        assert_abs_diff_eq!(scattering_density(&d), 1.0 / (2.0 * PI), epsilon = 1e-16);
        let z = Direction::new(0.0, 0.3).unwrap();
        assert_eq!(scattering_density(&z), 0.0);
    }

    #[test]
    fn diagonal_entry_is_one() {
        let g = test_ula(FRAC_PI_4);
        let v = oracle_entry_ula(&g, 3, 3, &settings()).unwrap();
        assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn swapped_pair_is_conjugate() {
        let g = test_ula(FRAC_PI_4);
        let fwd = oracle_entry_ula(&g, 1, 5, &settings()).unwrap();
        let bwd = oracle_entry_ula(&g, 5, 1, &settings()).unwrap();
        assert_abs_diff_eq!(fwd.re, bwd.re, epsilon = 1e-12);
        assert_abs_diff_eq!(fwd.im, -bwd.im, epsilon = 1e-12);
    }

    #[test]
    fn real_part_matches_closed_form() {
        let g = test_ula(FRAC_PI_4);
        let oracle = oracle_entry_ula(&g, 0, 1, &settings()).unwrap();
        let closed = corr_ula_entry(&g, 0, 1);
        assert_abs_diff_eq!(oracle.re, closed, epsilon = 1e-8);
    }

    #[test]
    fn matches_independent_midpoint_rule() {
        // Cross-check one oracle entry against a plain midpoint-rule
        // integration with 4096 x 4096 samples.
        let g = test_ula(FRAC_PI_4);
        let (m, n) = (1usize, 4usize);
        let oracle = oracle_entry_ula(&g, m, n, &settings()).unwrap();

        let k = 2.0 * PI / g.wavelength();
        let pm = g.position(m);
        let pn = g.position(n);
        let (py, pz) = (k * (pn.y - pm.y), k * (pn.z - pm.z));
        let cells = 4096usize;
        let h = PI / cells as f64;
        let mut acc_re = 0.0f64;
        let mut acc_im = 0.0f64;
        for it in 0..cells {
            let theta = (it as f64 + 0.5) * h;
            let weight = theta.sin() / (2.0 * PI);
            for ip in 0..cells {
                let phi = (ip as f64 + 0.5) * h;
                let phase = py * theta.sin() * phi.sin() + pz * theta.cos();
                acc_re += weight * phase.cos();
                acc_im += weight * phase.sin();
            }
        }
        let midpoint = Complex::new(acc_re * h * h, acc_im * h * h);
        // the bound is the midpoint rule's own O(h^2) accuracy at this grid
        assert_abs_diff_eq!(oracle.re, midpoint.re, epsilon = 1e-7);
        assert_abs_diff_eq!(oracle.im, midpoint.im, epsilon = 1e-7);
    }

    #[test]
    fn non_convergence_is_reported() {
        let g = test_ula(FRAC_PI_2);
        let bad = OracleSettings { order: 1, tolerance: 1e-14, max_doublings: 1 };
        let res = oracle_entry_ula(&g, 0, 7, &bad);
        assert!(matches!(res, Err(Error::QuadratureNotConverged { .. })));
    }

    #[test]
    fn ura_identical_pair_is_one() {
        let g = ArchedUraGeometry::<f64>::new(3, 3, 0.01, 0.08, FRAC_PI_4, 0.02).unwrap();
        let v = oracle_entry_ura(&g, (1, 2), (1, 2), &settings()).unwrap();
        assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn ura_same_arc_conjugates_ula_entry() {
        let lambda = 0.02;
        let ura = ArchedUraGeometry::<f64>::new(2, 8, 0.01, 4.0 * lambda, FRAC_PI_4, lambda)
            .unwrap();
        let ula = test_ula(FRAC_PI_4);
        for (n1, n2) in [(0usize, 3usize), (2, 7), (5, 1)] {
            let via_ura = oracle_entry_ura(&ura, (1, n1), (1, n2), &settings()).unwrap();
            let via_ula = oracle_entry_ula(&ula, n1, n2, &settings()).unwrap();
            assert_abs_diff_eq!(via_ura.re, via_ula.re, epsilon = 1e-10);
            assert_abs_diff_eq!(via_ura.im, -via_ula.im, epsilon = 1e-10);
        }
    }

    #[test]
    fn odd_series_identical_pair_vanishes() {
        let g = test_ula(FRAC_PI_4);
        let s = odd_term_series_ula(&g, 2, 2, 61, &settings()).unwrap();
        assert_eq!(s.value, 0.0);
        assert!(s.converged);
    }

    #[test]
    fn odd_series_matches_oracle_imaginary_part() {
        let g = test_ula(FRAC_PI_4);
        for (m, n) in [(0usize, 1usize), (0, 7), (2, 5)] {
            let oracle = oracle_entry_ula(&g, m, n, &settings()).unwrap();
            let series = odd_term_series_ula(&g, m, n, 61, &settings()).unwrap();
            assert!(series.converged);
            assert_abs_diff_eq!(series.value, oracle.im, epsilon = 1e-6);
        }
    }

    #[test]
    fn odd_series_terms_decay_past_turning_point() {
        let g = test_ula(FRAC_PI_2);
        let (m, n) = (0usize, 7usize);
        let k = 2.0 * PI / g.wavelength();
        let pm = g.position(m);
        let pn = g.position(n);
        let span = (k * (pn.y - pm.y)).hypot(k * (pn.z - pm.z));
        let series = odd_term_series_ula(&g, m, n, 121, &settings()).unwrap();
        let start = (span.ceil() as usize).div_ceil(2); // first term index past |b|
        for t in (start + 1)..series.terms.len() {
            assert!(
                series.terms[t].abs() <= series.terms[t - 1].abs() + 1e-18,
                "term {t} does not decay"
            );
        }
        // Doubling the truncation barely moves the value.
        let shorter = odd_term_series_ula(&g, m, n, 61, &settings()).unwrap();
        assert_abs_diff_eq!(series.value, shorter.value, epsilon = 1e-9);
    }

    #[test]
    fn validate_planar_half_wavelength() {
        let lambda = 0.02;
        let g = ArchedUlaGeometry::<f64>::new(4, 1.5 * lambda, 0.0, lambda).unwrap();
        let report = validate(&ArrayGeometry::Ula(g), 10, 0, &settings()).unwrap();
        assert_eq!(report.pairs, 10); // all 4*5/2 unordered pairs
        assert!(report.max_abs_real_error < 1e-10, "{}", report.max_abs_real_error);
        assert_eq!(report.geometry.kind, "ula");
        assert_eq!(report.seed, 0);
    }

    #[test]
    fn validate_arched_ula_theorem_accuracy() {
        let report =
            validate(&ArrayGeometry::Ula(test_ula(FRAC_PI_4)), 10, 0, &settings()).unwrap();
        assert_eq!(report.pairs, 36);
        assert!(report.max_abs_real_error < 1e-8, "{}", report.max_abs_real_error);
        assert!(report.max_abs_imag_part > 0.0);
    }

    #[test]
    fn validate_samples_reproducibly_on_large_arrays() {
        let lambda = 0.01;
        let g = ArchedUlaGeometry::<f64>::new(40, 0.1, 0.3, lambda).unwrap();
        let geom = ArrayGeometry::Ula(g);
        let quick = OracleSettings { order: 64, tolerance: 1e-8, max_doublings: 2 };
        let a = validate(&geom, 5, 7, &quick).unwrap();
        let b = validate(&geom, 5, 7, &quick).unwrap();
        assert_eq!(a.pairs, 5);
        for (x, y) in a.entries.iter().zip(&b.entries) {
            assert_eq!((x.i, x.j), (y.i, y.j));
            assert_eq!(x.oracle_re, y.oracle_re);
        }
        let c = validate(&geom, 5, 8, &quick).unwrap();
        let same: Vec<_> = a.entries.iter().map(|r| (r.i, r.j)).collect();
        let other: Vec<_> = c.entries.iter().map(|r| (r.i, r.j)).collect();
        assert_ne!(same, other, "different seeds should draw different pairs");
    }

    #[test]
    fn validation_report_serializes() {
        let lambda = 0.05;
        let g = ArchedUlaGeometry::<f64>::new(3, lambda, 0.2, lambda).unwrap();
        let quick = OracleSettings { order: 64, tolerance: 1e-8, max_doublings: 2 };
        let report = validate(&ArrayGeometry::Ula(g), 3, 0, &quick).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        for field in [
            "geometry",
            "pairs",
            "max_abs_real_error",
            "max_abs_imag_part",
            "quadrature_order",
            "seed",
            "entries",
        ] {
            assert!(json.get(field).is_some(), "missing field {field}");
        }
        assert_eq!(json["geometry"]["kind"], "ula");
    }

    #[test]
    fn settings_validation() {
        let g = test_ula(FRAC_PI_4);
        let bad = OracleSettings { order: 0, tolerance: 1e-10, max_doublings: 1 };
        assert!(matches!(oracle_entry_ula(&g, 0, 1, &bad), Err(Error::Domain(_))));
        let bad = OracleSettings { order: 16, tolerance: 1e-15, max_doublings: 1 };
        assert!(matches!(oracle_entry_ula(&g, 0, 1, &bad), Err(Error::Domain(_))));
    }
}
