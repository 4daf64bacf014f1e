//! The geometry map behind a shell model.
//!
//! Benchmark geometries are either exact NURBS patches (flat shell,
//! cylinders via rational quadratic arcs) or analytic maps evaluated
//! through jet arithmetic (the flower surface, plus closed-form test
//! surfaces). Both expose parametric derivatives of x(r, s) through
//! order four.

use crate::error::Result;
use crate::jet::Jet;
use crate::nurbs::NurbsPatch;

pub trait GeometryMap: Sync + Send {
    /// Taylor jets of the map components at (r, s), truncated at `order`.
    fn jets(&self, r: f64, s: f64, order: usize) -> Result<[Jet; 3]>;
}

impl GeometryMap for NurbsPatch {
    fn jets(&self, r: f64, s: f64, order: usize) -> Result<[Jet; 3]> {
        self.geometry_jets(r, s, order)
    }
}

/// A closed-form surface given as a jet-valued closure.
pub struct AnalyticSurface {
    f: Box<dyn Fn(Jet, Jet) -> [Jet; 3] + Sync + Send>,
}

impl AnalyticSurface {
    pub fn new(f: impl Fn(Jet, Jet) -> [Jet; 3] + Sync + Send + 'static) -> Self {
        AnalyticSurface { f: Box::new(f) }
    }

    /// Sphere band of radius `radius`, parametrized as (r, s) ->
    /// (latitude, longitude) so the computed normal points inward and the
    /// principal curvatures come out as +1/R.
    pub fn sphere(radius: f64) -> Self {
        Self::new(move |r, s| {
            let (sin_phi, cos_phi) = r.sincos();
            let (sin_th, cos_th) = s.sincos();
            [
                cos_phi.mul(&cos_th).scale(radius),
                cos_phi.mul(&sin_th).scale(radius),
                sin_phi.scale(radius),
            ]
        })
    }

    /// Same sphere with the parameters swapped: the normal points outward.
    pub fn sphere_outward(radius: f64) -> Self {
        Self::new(move |r, s| {
            let (sin_phi, cos_phi) = s.sincos();
            let (sin_th, cos_th) = r.sincos();
            [
                cos_phi.mul(&cos_th).scale(radius),
                cos_phi.mul(&sin_th).scale(radius),
                sin_phi.scale(radius),
            ]
        })
    }

    /// Circular cylinder about the y axis: r axial over [0, length],
    /// s the arc angle. Normal points toward the axis.
    pub fn cylinder(radius: f64, _length: f64) -> Self {
        Self::new(move |r, s| {
            let (sin_th, cos_th) = s.sincos();
            [sin_th.scale(radius), r, cos_th.scale(radius)]
        })
    }

    /// Torus with major radius `big_r` and minor radius `rho`; generic
    /// doubly curved test surface (nonzero Gauss curvature).
    pub fn torus(big_r: f64, rho: f64) -> Self {
        Self::new(move |r, s| {
            let (sin_u, cos_u) = r.sincos();
            let (sin_v, cos_v) = s.sincos();
            let ring = cos_v.scale(rho).add_scalar(big_r);
            [ring.mul(&cos_u), ring.mul(&sin_u), sin_v.scale(rho)]
        })
    }

    /// The flower-shaped shell middle surface on (r, s) in [-1, 1]^2,
    /// closed in the r direction:
    /// x = ((A - C) cos t, (A - C) sin t, 1 - s^2) with t = pi (r + 1)
    /// and C = s (B + 0.3 cos 6t), A = 2.3, B = 0.8.
    pub fn flower() -> Self {
        const A: f64 = 2.3;
        const B: f64 = 0.8;
        Self::new(move |r, s| {
            let theta = r.add_scalar(1.0).scale(std::f64::consts::PI);
            let (sin_t, cos_t) = theta.sincos();
            let cos_6t = theta.scale(6.0).cos();
            let c = s.mul(&cos_6t.scale(0.3).add_scalar(B));
            let radial = c.neg().add_scalar(A);
            let z = s.mul(&s).neg().add_scalar(1.0);
            [radial.mul(&cos_t), radial.mul(&sin_t), z]
        })
    }
}

impl GeometryMap for AnalyticSurface {
    fn jets(&self, r: f64, s: f64, order: usize) -> Result<[Jet; 3]> {
        let rj = Jet::variable(r, 0, order);
        let sj = Jet::variable(s, 1, order);
        Ok((self.f)(rj, sj))
    }
}

/// Geometry of a shell model.
pub enum Geometry {
    Nurbs(NurbsPatch),
    Analytic(AnalyticSurface),
}

impl GeometryMap for Geometry {
    fn jets(&self, r: f64, s: f64, order: usize) -> Result<[Jet; 3]> {
        match self {
            Geometry::Nurbs(p) => p.jets(r, s, order),
            Geometry::Analytic(a) => a.jets(r, s, order),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flower_spot_values() {
        let f = AnalyticSurface::flower();
        // at r = -1, s = 0: C = 0, theta = 0 -> (2.3, 0, 1)
        let x = f.jets(-1.0, 0.0, 0).unwrap();
        assert!((x[0].val() - 2.3).abs() < 1e-14);
        assert!(x[1].val().abs() < 1e-13);
        assert!((x[2].val() - 1.0).abs() < 1e-14);
    }

    /// theta(-1) = 0 and theta(1) = 2 pi close the surface in r.
    #[test]
    fn flower_seam_is_periodic() {
        let f = AnalyticSurface::flower();
        for i in 0..=8 {
            let s = -1.0 + 0.25 * i as f64;
            let a = f.jets(-1.0, s, 1).unwrap();
            let b = f.jets(1.0, s, 1).unwrap();
            for c in 0..3 {
                assert!((a[c].val() - b[c].val()).abs() < 1e-12, "component {c} at s = {s}");
                // tangent vectors also match across the seam
                assert!((a[c].deriv(1, 0) - b[c].deriv(1, 0)).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn sphere_points_have_radius() {
        let f = AnalyticSurface::sphere(3.0);
        let x = f.jets(0.4, 1.1, 0).unwrap();
        let r = (x[0].val().powi(2) + x[1].val().powi(2) + x[2].val().powi(2)).sqrt();
        assert!((r - 3.0).abs() < 1e-14);
    }
}
