//! Arched ULA/URA element layouts and curvature parameters.
//!
//! Both array types live in the YZ-plane: an arc of total length `L` bent by
//! the angle `beta` (half the subtended central angle, `beta = L / (2R)`).
//! `beta = 0` is a straight line, `beta = pi/2` a semi-cylinder cross
//! section. The URA replicates the arc along the X-axis with uniform row
//! spacing.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Bend angle below which the exact planar formulas are used. Avoids the
/// catastrophic cancellation in `R (cos(beta - alpha) - cos beta)` as
/// `R -> inf`.
pub const PLANAR_BEND_THRESHOLD: f64 = 1e-9;

/// Curvature of the arc: either effectively straight or a finite radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curvature<T> {
    /// Bend angle below [`PLANAR_BEND_THRESHOLD`]; the layout is a straight line.
    Planar,
    /// Finite curvature radius `R = L / (2 beta)`.
    Curved { radius: T },
}

/// Curvature radius `R = L / (2 beta)`, or the planar sentinel for
/// vanishing bend angles.
pub fn bend_radius<T: Real>(arc_length: T, bend_angle: T) -> Result<Curvature<T>> {
    if !(arc_length > T::zero()) || !arc_length.is_finite() {
        return Err(Error::Domain(format!("arc length must be positive, got {arc_length}")));
    }
    check_bend_angle(bend_angle)?;
    if bend_angle < T::lit(PLANAR_BEND_THRESHOLD) {
        Ok(Curvature::Planar)
    } else {
        Ok(Curvature::Curved { radius: arc_length / (T::lit(2.0) * bend_angle) })
    }
}

fn check_bend_angle<T: Real>(bend_angle: T) -> Result<()> {
    if !bend_angle.is_finite() || bend_angle < T::zero() || bend_angle > T::FRAC_PI_2() {
        return Err(Error::Domain(format!(
            "bend angle must lie in [0, pi/2], got {bend_angle}"
        )));
    }
    Ok(())
}

/// Point in 3-D space, metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Point3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    /// Euclidean distance to another point.
    pub fn distance_to(&self, other: &Self) -> T {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Uniform linear array of `N` elements evenly spaced along an arc in the
/// YZ-plane.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchedUlaGeometry<T> {
    n_elements: usize,
    arc_length: T,
    bend_angle: T,
    wavelength: T,
    curvature: Curvature<T>,
}

impl<T: Real> ArchedUlaGeometry<T> {
    pub fn new(n_elements: usize, arc_length: T, bend_angle: T, wavelength: T) -> Result<Self> {
        if n_elements < 2 {
            return Err(Error::Domain(format!(
                "a linear array needs at least 2 elements, got {n_elements}"
            )));
        }
        if !(wavelength > T::zero()) || !wavelength.is_finite() {
            return Err(Error::Domain(format!("wavelength must be positive, got {wavelength}")));
        }
        let curvature = bend_radius(arc_length, bend_angle)?;
        Ok(Self { n_elements, arc_length, bend_angle, wavelength, curvature })
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn arc_length(&self) -> T {
        self.arc_length
    }

    pub fn bend_angle(&self) -> T {
        self.bend_angle
    }

    pub fn wavelength(&self) -> T {
        self.wavelength
    }

    pub fn curvature(&self) -> Curvature<T> {
        self.curvature
    }

    /// Element spacing along the arc, `L / (N - 1)`.
    pub fn element_spacing(&self) -> T {
        self.arc_length / T::from_count(self.n_elements - 1)
    }

    /// Central angle of element `i` (zero-based): `alpha_i = 2 beta i / (N - 1)`,
    /// covering `[0, 2 beta]`.
    pub fn central_angle(&self, i: usize) -> T {
        debug_assert!(i < self.n_elements);
        T::lit(2.0) * self.bend_angle * T::from_count(i) / T::from_count(self.n_elements - 1)
    }

    /// Angular step between neighbouring elements, `2 beta / (N - 1)`.
    pub fn angle_step(&self) -> T {
        T::lit(2.0) * self.bend_angle / T::from_count(self.n_elements - 1)
    }

    /// Position of element `i` (zero-based).
    ///
    /// Curved: `(0, R cos(beta - alpha_i) - R cos beta, R sin(beta - alpha_i))`.
    /// Planar: `(0, 0, L/2 - i d)`.
    pub fn position(&self, i: usize) -> Point3<T> {
        assert!(i < self.n_elements, "element index {i} out of range");
        match self.curvature {
            Curvature::Planar => {
                let z = self.arc_length / T::lit(2.0)
                    - T::from_count(i) * self.element_spacing();
                Point3::new(T::zero(), T::zero(), z)
            }
            Curvature::Curved { radius } => {
                let rel = self.bend_angle - self.central_angle(i);
                Point3::new(
                    T::zero(),
                    radius * (rel.cos() - self.bend_angle.cos()),
                    radius * rel.sin(),
                )
            }
        }
    }

    /// All element positions in element order.
    pub fn positions(&self) -> Vec<Point3<T>> {
        (0..self.n_elements).map(|i| self.position(i)).collect()
    }
}

/// Uniform rectangular array: `M` copies of an arched ULA stacked along the
/// X-axis with uniform row spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchedUraGeometry<T> {
    rows: usize,
    arc: ArchedUlaGeometry<T>,
    row_spacing: T,
}

impl<T: Real> ArchedUraGeometry<T> {
    pub fn new(
        rows: usize,
        per_arc: usize,
        row_spacing: T,
        arc_length: T,
        bend_angle: T,
        wavelength: T,
    ) -> Result<Self> {
        if rows < 1 {
            return Err(Error::Domain("a rectangular array needs at least 1 row".into()));
        }
        if !(row_spacing > T::zero()) || !row_spacing.is_finite() {
            return Err(Error::Domain(format!(
                "row spacing must be positive, got {row_spacing}"
            )));
        }
        let arc = ArchedUlaGeometry::new(per_arc, arc_length, bend_angle, wavelength)?;
        Ok(Self { rows, arc, row_spacing })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn per_arc(&self) -> usize {
        self.arc.n_elements()
    }

    pub fn row_spacing(&self) -> T {
        self.row_spacing
    }

    pub fn total_elements(&self) -> usize {
        self.rows * self.arc.n_elements()
    }

    pub fn wavelength(&self) -> T {
        self.arc.wavelength()
    }

    pub fn bend_angle(&self) -> T {
        self.arc.bend_angle()
    }

    pub fn arc_length(&self) -> T {
        self.arc.arc_length()
    }

    pub fn curvature(&self) -> Curvature<T> {
        self.arc.curvature()
    }

    /// The shared arc all rows are copies of.
    pub fn arc(&self) -> &ArchedUlaGeometry<T> {
        &self.arc
    }

    /// Flattened row-major index of element `(row, arc_pos)`.
    pub fn flat_index(&self, row: usize, arc_pos: usize) -> usize {
        debug_assert!(row < self.rows && arc_pos < self.per_arc());
        row * self.per_arc() + arc_pos
    }

    /// Inverse of [`flat_index`](Self::flat_index).
    pub fn element_pair(&self, flat: usize) -> (usize, usize) {
        debug_assert!(flat < self.total_elements());
        (flat / self.per_arc(), flat % self.per_arc())
    }

    /// Position of element `(row, arc_pos)`; rows are zero-based so the first
    /// arc sits at `x = 0` (correlations depend only on row differences).
    pub fn position(&self, row: usize, arc_pos: usize) -> Point3<T> {
        assert!(row < self.rows, "row index {row} out of range");
        let mut p = self.arc.position(arc_pos);
        p.x = T::from_count(row) * self.row_spacing;
        p
    }

    /// All positions in row-major element order.
    pub fn positions(&self) -> Vec<Point3<T>> {
        let mut out = Vec::with_capacity(self.total_elements());
        for row in 0..self.rows {
            for arc_pos in 0..self.per_arc() {
                out.push(self.position(row, arc_pos));
            }
        }
        out
    }
}

/// Either array type; lets validation and the CLI treat both uniformly.
#[derive(Debug, Clone, PartialEq)]
pub enum ArrayGeometry<T> {
    Ula(ArchedUlaGeometry<T>),
    Ura(ArchedUraGeometry<T>),
}

impl<T: Real> ArrayGeometry<T> {
    /// Total number of elements.
    pub fn element_count(&self) -> usize {
        match self {
            ArrayGeometry::Ula(g) => g.n_elements(),
            ArrayGeometry::Ura(g) => g.total_elements(),
        }
    }

    pub fn wavelength(&self) -> T {
        match self {
            ArrayGeometry::Ula(g) => g.wavelength(),
            ArrayGeometry::Ura(g) => g.wavelength(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn bend_radius_examples() {
        // Half-turn of the doubled angle: L = pi, beta = pi/2 -> R = 1.
        match bend_radius(PI, FRAC_PI_2).unwrap() {
            Curvature::Curved { radius } => assert_abs_diff_eq!(radius, 1.0, epsilon = 1e-15),
            Curvature::Planar => panic!("expected curved"),
        }
        match bend_radius(0.3142, FRAC_PI_2).unwrap() {
            Curvature::Curved { radius } => {
                assert_abs_diff_eq!(radius, 0.3142 / PI, epsilon = 1e-15)
            }
            Curvature::Planar => panic!("expected curved"),
        }
        assert_eq!(bend_radius(1.0, 0.0).unwrap(), Curvature::Planar);
        assert_eq!(bend_radius(1.0, 0.9e-9).unwrap(), Curvature::Planar);
        assert!(matches!(bend_radius(1.0, -0.1), Err(Error::Domain(_))));
        assert!(matches!(bend_radius(1.0, FRAC_PI_2 + 0.01), Err(Error::Domain(_))));
    }

    #[test]
    fn ula_first_element_on_z_axis() {
        let g = ArchedUlaGeometry::new(8, 1.0, FRAC_PI_4, 0.1).unwrap();
        let Curvature::Curved { radius } = g.curvature() else { panic!() };
        let p = g.position(0);
        assert_abs_diff_eq!(p.x, 0.0);
        assert_abs_diff_eq!(p.y, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.z, radius * FRAC_PI_4.sin(), epsilon = 1e-15);
    }

    #[test]
    fn ula_middle_element_at_semicircle_apex() {
        // beta = pi/2 and alpha = beta puts the element at (0, R, 0).
        let n = 9;
        let g = ArchedUlaGeometry::new(n, PI, FRAC_PI_2, 0.1).unwrap();
        let Curvature::Curved { radius } = g.curvature() else { panic!() };
        let mid = (n - 1) / 2;
        assert_abs_diff_eq!(g.central_angle(mid), FRAC_PI_2, epsilon = 1e-15);
        let p = g.position(mid);
        assert_abs_diff_eq!(p.y, radius, epsilon = 1e-15);
        assert_abs_diff_eq!(p.z, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn ula_planar_layout() {
        let g = ArchedUlaGeometry::new(3, 2.0, 0.0, 0.1).unwrap();
        let pts = g.positions();
        assert_eq!(pts[0], Point3::new(0.0, 0.0, 1.0));
        assert_eq!(pts[1], Point3::new(0.0, 0.0, 0.0));
        assert_eq!(pts[2], Point3::new(0.0, 0.0, -1.0));
    }

    #[test]
    fn ula_rejects_bad_inputs() {
        assert!(ArchedUlaGeometry::new(1, 1.0, 0.1, 0.1).is_err());
        assert!(ArchedUlaGeometry::new(4, -1.0, 0.1, 0.1).is_err());
        assert!(ArchedUlaGeometry::new(4, 1.0, 2.0, 0.1).is_err());
        assert!(ArchedUlaGeometry::new(4, 1.0, 0.1, 0.0).is_err());
    }

    #[test]
    fn ula_neighbour_chords_are_equal() {
        let g = ArchedUlaGeometry::new(16, 0.5, 1.1, 0.01).unwrap();
        let pts = g.positions();
        let first = pts[0].distance_to(&pts[1]);
        for w in pts.windows(2) {
            assert_abs_diff_eq!(w[0].distance_to(&w[1]), first, epsilon = 1e-12);
        }
    }

    #[test]
    fn ula_chord_matches_angular_formula() {
        // Chord between elements m and n equals 2 R |sin((alpha_n - alpha_m)/2)|.
        let g = ArchedUlaGeometry::<f64>::new(11, 0.8, 0.9, 0.02).unwrap();
        let Curvature::Curved { radius } = g.curvature() else { panic!() };
        let pts = g.positions();
        for m in 0..11 {
            for n in 0..11 {
                let chord = pts[m].distance_to(&pts[n]);
                let half = (g.central_angle(n) - g.central_angle(m)) / 2.0;
                assert_abs_diff_eq!(chord, 2.0 * radius * half.sin().abs(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn ula_small_bend_converges_to_planar_layout() {
        let l = 2.0;
        let curved = ArchedUlaGeometry::new(32, l, 1e-6, 0.1).unwrap();
        let planar = ArchedUlaGeometry::new(32, l, 0.0, 0.1).unwrap();
        for (c, p) in curved.positions().iter().zip(planar.positions()) {
            assert!(c.distance_to(&p) <= 1e-5 * l);
        }
    }

    #[test]
    fn ura_first_element_matches_ula() {
        let g = ArchedUraGeometry::new(3, 8, 0.5, 1.0, FRAC_PI_4, 0.1).unwrap();
        let p = g.position(0, 0);
        let Curvature::Curved { radius } = g.curvature() else { panic!() };
        assert_abs_diff_eq!(p.x, 0.0);
        assert_abs_diff_eq!(p.y, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.z, radius * FRAC_PI_4.sin(), epsilon = 1e-15);
    }

    #[test]
    fn ura_rows_differ_only_in_x() {
        let g = ArchedUraGeometry::new(2, 5, 0.5, 1.0, 0.7, 0.1).unwrap();
        for arc_pos in 0..5 {
            let a = g.position(0, arc_pos);
            let b = g.position(1, arc_pos);
            assert_abs_diff_eq!(b.x - a.x, 0.5, epsilon = 1e-15);
            assert_eq!(a.y, b.y);
            assert_eq!(a.z, b.z);
        }
    }

    #[test]
    fn ura_semicylinder_apex() {
        // beta = pi/2, L = pi (R = 1): the arc midpoint sits at (x, 1, 0).
        let g = ArchedUraGeometry::new(2, 9, 0.25, PI, FRAC_PI_2, 0.1).unwrap();
        let p = g.position(1, 4);
        assert_abs_diff_eq!(p.x, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(p.y, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.z, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn ura_row_major_indexing() {
        let g = ArchedUraGeometry::new(3, 4, 0.1, 1.0, 0.5, 0.1).unwrap();
        assert_eq!(g.total_elements(), 12);
        assert_eq!(g.flat_index(2, 3), 11);
        assert_eq!(g.element_pair(11), (2, 3));
        let pts = g.positions();
        assert_eq!(pts.len(), 12);
        assert_eq!(pts[g.flat_index(1, 2)], g.position(1, 2));
    }

    proptest! {
        #[test]
        fn prop_chord_formula(
            n in 2usize..24,
            l in 0.05f64..4.0,
            beta in 1e-6f64..FRAC_PI_2,
            m in 0usize..24,
            k in 0usize..24,
        ) {
            let m = m % n;
            let k = k % n;
            let g = ArchedUlaGeometry::new(n, l, beta, 0.01).unwrap();
            let Curvature::Curved { radius } = g.curvature() else { return Ok(()); };
            let chord = g.position(m).distance_to(&g.position(k));
            let half = (g.central_angle(k) - g.central_angle(m)) / 2.0;
            prop_assert!((chord - 2.0 * radius * half.sin().abs()).abs() < 1e-12);
        }

        #[test]
        fn prop_psi_in_range(
            n in 2usize..40,
            beta in 0.0f64..FRAC_PI_2,
        ) {
            let g = ArchedUlaGeometry::new(n, 1.0, beta, 0.01).unwrap();
            for i in 0..n {
                let a = g.central_angle(i);
                prop_assert!((0.0..=PI + 1e-12).contains(&a));
            }
        }
    }
}
