//! Distances, phase differences and steering vectors for plane waves
//! impinging on arched arrays.
//!
//! A source direction is given by the zenith angle `theta` and the azimuth
//! `phi`, both restricted to `[0, pi]` (the half-space in front of the
//! array). The far-field phase of an element is `(2 pi / lambda) * u . p`
//! with `u` the unit direction and `p` the element position; all operations
//! below are different views of that dot product.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{ArchedUlaGeometry, ArchedUraGeometry, Curvature, Point3};
use crate::scalar::Real;

/// Source direction; zenith `theta` and azimuth `phi`, both in `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction<T> {
    theta: T,
    phi: T,
}

impl<T: Real> Direction<T> {
    pub fn new(theta: T, phi: T) -> Result<Self> {
        for (name, v) in [("theta", theta), ("phi", phi)] {
            if !v.is_finite() || v < T::zero() || v > T::PI() {
                return Err(Error::Domain(format!("{name} must lie in [0, pi], got {v}")));
            }
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    /// Unit vector pointing towards the source.
    pub fn unit_vector(&self) -> [T; 3] {
        [
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        ]
    }
}

/// A user at radius `r` along a [`Direction`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserLocation<T> {
    r: T,
    direction: Direction<T>,
}

impl<T: Real> UserLocation<T> {
    pub fn new(r: T, direction: Direction<T>) -> Result<Self> {
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::Domain(format!("user radius must be positive, got {r}")));
        }
        Ok(Self { r, direction })
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn direction(&self) -> &Direction<T> {
        &self.direction
    }

    /// Cartesian position `r * (sin t cos p, sin t sin p, cos t)`.
    pub fn position(&self) -> Point3<T> {
        let [ux, uy, uz] = self.direction.unit_vector();
        Point3::new(self.r * ux, self.r * uy, self.r * uz)
    }
}

/// Unit-norm vector of per-element phase responses.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector<T> {
    entries: Vec<Complex<T>>,
}

impl<T: Real> SteeringVector<T> {
    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Euclidean norm; equals 1 by construction.
    pub fn norm(&self) -> T {
        self.entries.iter().map(|e| e.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt()
    }
}

fn dot<T: Real>(u: &[T; 3], p: &Point3<T>) -> T {
    u[0] * p.x + u[1] * p.y + u[2] * p.z
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i >= n {
        return Err(Error::Domain(format!("element index {i} out of range (array has {n})")));
    }
    Ok(())
}

/// Exact Euclidean distance between the user and element `n` (zero-based).
pub fn exact_distance_ula<T: Real>(
    g: &ArchedUlaGeometry<T>,
    user: &UserLocation<T>,
    n: usize,
) -> Result<T> {
    check_index(n, g.n_elements())?;
    Ok(user.position().distance_to(&g.position(n)))
}

/// Far-field (first-order) distance `r - u . p_n`.
pub fn farfield_distance_ula<T: Real>(
    g: &ArchedUlaGeometry<T>,
    user: &UserLocation<T>,
    n: usize,
) -> Result<T> {
    check_index(n, g.n_elements())?;
    let u = user.direction().unit_vector();
    Ok(user.r() - dot(&u, &g.position(n)))
}

/// Far-field phase difference of elements `m` and `n` in radians:
/// `(2 pi / lambda) * u . (p_n - p_m)`. Antisymmetric in `(m, n)`.
pub fn phase_delta_ula<T: Real>(
    g: &ArchedUlaGeometry<T>,
    m: usize,
    n: usize,
    dir: &Direction<T>,
) -> Result<T> {
    check_index(m, g.n_elements())?;
    check_index(n, g.n_elements())?;
    let u = dir.unit_vector();
    let pm = g.position(m);
    let pn = g.position(n);
    let k = T::lit(2.0) * T::PI() / g.wavelength();
    Ok(k * (dot(&u, &pn) - dot(&u, &pm)))
}

/// Steering vector of the arched ULA: entry `n` is
/// `exp(j (2 pi / lambda) u . p_n) / sqrt(N)`.
pub fn steering_ula<T: Real>(g: &ArchedUlaGeometry<T>, dir: &Direction<T>) -> SteeringVector<T> {
    let u = dir.unit_vector();
    let k = T::lit(2.0) * T::PI() / g.wavelength();
    let scale = T::from_count(g.n_elements()).sqrt().recip();
    let entries = (0..g.n_elements())
        .map(|n| Complex::from_polar(scale, k * dot(&u, &g.position(n))))
        .collect();
    SteeringVector { entries }
}

/// Theta-independent factors of the URA pair phase decomposition
/// `A cos(phi) + B sin(phi) + C`, with `A = a_hat sin(theta)`,
/// `B = b_hat sin(theta)`, `C = c_hat cos(theta)`. All three are lengths.
///
/// The decomposition fixes signs so that the azimuthal (y) and vertical (z)
/// separation terms enter negated relative to the raw position difference;
/// the closed-form correlation is even in both, so only the sign of the
/// oracle's imaginary part depends on this convention.
pub fn ura_abc_coefficients<T: Real>(
    g: &ArchedUraGeometry<T>,
    a: (usize, usize),
    b: (usize, usize),
) -> Result<(T, T, T)> {
    let (m1, n1) = a;
    let (m2, n2) = b;
    check_index(m1, g.rows())?;
    check_index(m2, g.rows())?;
    check_index(n1, g.per_arc())?;
    check_index(n2, g.per_arc())?;

    let two = T::lit(2.0);
    let d_rows = T::from_count(m1.max(m2) - m1.min(m2));
    let row_sep = if m1 >= m2 { d_rows } else { -d_rows } * g.row_spacing();

    match g.curvature() {
        Curvature::Planar => {
            let steps = T::from_count(n1.max(n2) - n1.min(n2));
            let signed = if n1 >= n2 { steps } else { -steps };
            // 2R sin((psi1 - psi2)/2) -> (n1 - n2) * d_yz, and the oblique
            // factor sin(beta - psi_bar) -> 0.
            Ok((row_sep, T::zero(), signed * g.arc().element_spacing()))
        }
        Curvature::Curved { radius } => {
            let psi1 = g.arc().central_angle(n1);
            let psi2 = g.arc().central_angle(n2);
            let half_diff = (psi1 - psi2) / two;
            let mean = (psi1 + psi2) / two;
            let rel = g.bend_angle() - mean;
            let b_hat = -two * radius * rel.sin() * half_diff.sin();
            let c_hat = two * radius * rel.cos() * half_diff.sin();
            Ok((row_sep, b_hat, c_hat))
        }
    }
}

/// `(A, B, C)` of the URA pair phase decomposition at zenith angle `theta`.
pub fn ura_abc<T: Real>(
    g: &ArchedUraGeometry<T>,
    a: (usize, usize),
    b: (usize, usize),
    theta: T,
) -> Result<(T, T, T)> {
    let (a_hat, b_hat, c_hat) = ura_abc_coefficients(g, a, b)?;
    Ok((a_hat * theta.sin(), b_hat * theta.sin(), c_hat * theta.cos()))
}

/// Pair coefficients `(D, E)`: `D = sqrt(A_hat^2 + B_hat^2) >= 0` collects the
/// azimuth-modulated separation, `E` the vertical one. `sqrt(D^2 + E^2)` is
/// the chord distance between the two elements.
pub fn ura_de<T: Real>(
    g: &ArchedUraGeometry<T>,
    a: (usize, usize),
    b: (usize, usize),
) -> Result<(T, T)> {
    let (a_hat, b_hat, c_hat) = ura_abc_coefficients(g, a, b)?;
    Ok((a_hat.hypot(b_hat), c_hat))
}

/// Steering vector of the arched URA in row-major element order; entry
/// `(m, n)` is `exp(j (2 pi / lambda) u . p_{m,n}) / sqrt(M N)`.
pub fn steering_ura<T: Real>(g: &ArchedUraGeometry<T>, dir: &Direction<T>) -> SteeringVector<T> {
    let u = dir.unit_vector();
    let k = T::lit(2.0) * T::PI() / g.wavelength();
    let scale = T::from_count(g.total_elements()).sqrt().recip();
    let mut entries = Vec::with_capacity(g.total_elements());
    for row in 0..g.rows() {
        for arc_pos in 0..g.per_arc() {
            let p = g.position(row, arc_pos);
            entries.push(Complex::from_polar(scale, k * dot(&u, &p)));
        }
    }
    SteeringVector { entries }
}
