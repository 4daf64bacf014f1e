//! Tangential differential calculus at integration points: frames,
//! projectors, tangential gradients and Hessians of shape functions,
//! Weingarten map and curvatures, and surface divergences.

pub mod frame;
pub mod ops;
pub mod shape;

pub use frame::{principal_curvatures, projector, BoundaryFrame, FrameJets, SurfaceFrame};
pub use ops::{
    hessian_cov, surface_divergence_tensor, surface_divergence_vector, tangential_gradient_scalar,
};
pub use shape::{idx3, idx4, ShapeDerivs};

use crate::error::Result;
use crate::geometry::GeometryMap;

/// Frame jets of a geometry at a parametric point.
pub fn frame_jets_at(geom: &dyn GeometryMap, r: f64, s: f64, order: usize) -> Result<FrameJets> {
    FrameJets::build(geom.jets(r, s, order)?, (r, s))
}

/// Plain-value frame of a geometry at a parametric point.
pub fn frame_at(geom: &dyn GeometryMap, r: f64, s: f64, order: usize) -> Result<SurfaceFrame> {
    Ok(SurfaceFrame::from_jets(&frame_jets_at(geom, r, s, order)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::AnalyticSurface;
    use crate::jet::Jet;
    use crate::nurbs::{KnotVector, SplineSpace};
    use nalgebra::{Matrix3, Vector3};

    fn flat_tilted() -> AnalyticSurface {
        // flat plane spanned by two skew unit directions
        AnalyticSurface::new(|r, s| {
            let e1 = [0.8, 0.6, 0.0];
            let e2 = [-0.36, 0.48, 0.8];
            [
                r.scale(e1[0]).add(&s.scale(e2[0])),
                r.scale(e1[1]).add(&s.scale(e2[1])),
                r.scale(e1[2]).add(&s.scale(e2[2])),
            ]
        })
    }

    #[test]
    fn projector_basics() {
        let p = projector(&Vector3::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(p, Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, 0.0)));
        assert!(projector(&Vector3::new(0.0, 0.0, 1.1)).is_err());

        // the flat-shell normal from the first benchmark
        let n = Vector3::new(-0.25, -(3.0f64.sqrt()) / 2.0, 3.0f64.sqrt() / 4.0);
        assert!((n.norm() - 1.0).abs() < 1e-15);
        let p = projector(&n).unwrap();
        assert!((p * n).norm() < 1e-14);
        assert!((p * p - p).norm() < 1e-14);
        assert!((p - p.transpose()).norm() < 1e-15);
        let eig = nalgebra::SymmetricEigen::new(p);
        let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(ev[0].abs() < 1e-14);
        assert!((ev[1] - 1.0).abs() < 1e-14 && (ev[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn frame_invariants_on_curved_surfaces() {
        let surfaces: Vec<(AnalyticSurface, (f64, f64))> = vec![
            (AnalyticSurface::sphere(2.0), (0.3, 0.8)),
            (AnalyticSurface::cylinder(25.0, 50.0), (12.0, 0.5)),
            (AnalyticSurface::torus(2.0, 0.5), (1.0, 2.0)),
            (flat_tilted(), (0.4, 0.2)),
        ];
        for (geom, (r, s)) in &surfaces {
            let f = frame_at(geom, *r, *s, 3).unwrap();
            let p = f.projector;
            assert!((p * p - p).norm() <= 1e-12);
            assert!((p - p.transpose()).norm() <= 1e-12);
            assert!((p * f.normal).norm() <= 1e-12);
            assert!((f.normal.norm() - 1.0).abs() <= 1e-12);
            let h = f.weingarten;
            assert!((h - h.transpose()).norm() <= 1e-10 * h.norm().max(1.0), "H symmetric");
            assert!((h * f.normal).norm() <= 1e-10 * h.norm().max(1.0), "H in-plane");
            assert!((p * h * p - h).norm() <= 1e-10 * h.norm().max(1.0));
            // one zero eigenvalue with eigenvector n
            let eig = nalgebra::SymmetricEigen::new((h + h.transpose()) * 0.5);
            let mut best = (f64::MAX, 0usize);
            for k in 0..3 {
                let align = eig.eigenvectors.column(k).dot(&f.normal).abs();
                if 1.0 - align < best.0 {
                    best = (1.0 - align, k);
                }
            }
            assert!(eig.eigenvalues[best.1].abs() <= 1e-9 * h.norm().max(1.0));
            assert!((f.mean_curvature - h.trace()).abs() <= 1e-12 * h.norm().max(1.0));
            assert!((f.gauss_curvature - f.kappa1 * f.kappa2).abs() <= 1e-10);
        }
    }

    #[test]
    fn flat_patch_has_zero_curvature() {
        let f = frame_at(&flat_tilted(), 0.3, 0.6, 2).unwrap();
        assert!(f.weingarten.norm() < 1e-13);
        assert!(f.kappa1.abs() < 1e-13 && f.kappa2.abs() < 1e-13);
        assert!(f.mean_curvature.abs() < 1e-13);
    }

    /// Cylinder of radius 25: principal curvatures {1/25, 0}.
    #[test]
    fn cylinder_principal_curvatures() {
        let f = frame_at(&AnalyticSurface::cylinder(25.0, 50.0), 20.0, 0.7, 2).unwrap();
        assert!((f.kappa1 - 1.0 / 25.0).abs() < 1e-12, "kappa1 = {}", f.kappa1);
        assert!(f.kappa2.abs() < 1e-12);
        assert!(f.gauss_curvature.abs() < 1e-12);
    }

    /// Sphere of radius R: kappa1 = kappa2 = +1/R under the sign
    /// convention kappa = -eig(H).
    #[test]
    fn sphere_principal_curvatures() {
        for radius in [1.0, 2.5] {
            let f = frame_at(&AnalyticSurface::sphere(radius), 0.4, 1.2, 2).unwrap();
            assert!((f.kappa1 - 1.0 / radius).abs() < 1e-11);
            assert!((f.kappa2 - 1.0 / radius).abs() < 1e-11);
            assert!((f.gauss_curvature - 1.0 / (radius * radius)).abs() < 1e-10);
        }
    }

    /// Weingarten map against finite differences of the exact normal
    /// field: d n / d r = H J_r by the chain rule.
    #[test]
    fn weingarten_matches_normal_field_differences() {
        let geoms: Vec<(AnalyticSurface, (f64, f64))> = vec![
            (AnalyticSurface::sphere(2.0), (0.2, 0.9)),
            (AnalyticSurface::torus(2.0, 0.6), (0.8, 1.7)),
        ];
        let h = 1e-6;
        for (geom, (r, s)) in &geoms {
            let f = frame_at(geom, *r, *s, 2).unwrap();
            for axis in 0..2 {
                let (rp, sp) = if axis == 0 { (*r + h, *s) } else { (*r, *s + h) };
                let (rm, sm) = if axis == 0 { (*r - h, *s) } else { (*r, *s - h) };
                let np = frame_at(geom, rp, sp, 1).unwrap().normal;
                let nm = frame_at(geom, rm, sm, 1).unwrap().normal;
                let fd = (np - nm) / (2.0 * h);
                let chain = f.weingarten * f.jac.column(axis);
                assert!((fd - chain).norm() <= 1e-7 * chain.norm().max(1.0));
            }
        }
    }

    /// Gauss curvature changes sign between the outer and inner torus
    /// equator, independent of normal orientation.
    #[test]
    fn torus_gauss_curvature_sign() {
        let geom = AnalyticSurface::torus(2.0, 0.5);
        let outer = frame_at(&geom, 0.3, 0.0, 2).unwrap();
        let inner = frame_at(&geom, 0.3, std::f64::consts::PI, 2).unwrap();
        assert!(outer.gauss_curvature > 1e-3);
        assert!(inner.gauss_curvature < -1e-3);
    }

    /// Both routes to the tangential gradient agree: P grad(extension)
    /// versus J G^{-1} grad_r(pullback), for u = z on a sphere.
    #[test]
    fn gradient_routes_agree_on_sphere() {
        let geom = AnalyticSurface::sphere(1.5);
        for &(r, s) in &[(0.3, 0.7), (-0.4, 2.0), (0.9, 4.0)] {
            let jets = frame_jets_at(&geom, r, s, 2).unwrap();
            let f = SurfaceFrame::from_jets(&jets);
            // pullback route: u(r, s) = x_3(r, s)
            let g = jets.tangential_gradient(&jets.x[2]);
            let pullback = Vector3::new(g[0].val(), g[1].val(), g[2].val());
            // extension route: grad z = e_z, projected
            let extension = f.projector * Vector3::new(0.0, 0.0, 1.0);
            assert!((pullback - extension).norm() <= 1e-10);
            assert!(pullback.dot(&f.normal).abs() <= 1e-12);
        }
    }

    /// Surface divergence identities: constants vanish, flat identity
    /// field has divergence 2, and div n = tr H = 2/R on an
    /// outward-oriented sphere.
    #[test]
    fn divergence_cases() {
        // constant field
        let zero = Matrix3::zeros();
        assert_eq!(surface_divergence_vector(&zero), 0.0);

        // v = (x, y, 0) on the flat z = 0 plane: grad_dir v = P-ish diag
        let geom = AnalyticSurface::new(|r, s| [r, s, Jet::constant(0.0, r.order())]);
        let jets = frame_jets_at(&geom, 0.2, 0.5, 2).unwrap();
        let gx = jets.tangential_gradient(&jets.x[0]);
        let gy = jets.tangential_gradient(&jets.x[1]);
        let mut grad_dir = Matrix3::zeros();
        for j in 0..3 {
            grad_dir[(0, j)] = gx[j].val();
            grad_dir[(1, j)] = gy[j].val();
        }
        assert!((surface_divergence_vector(&grad_dir) - 2.0).abs() < 1e-13);

        // div n on the outward sphere
        let radius = 2.0;
        let geom = AnalyticSurface::sphere_outward(radius);
        let f = frame_at(&geom, 0.4, 0.9, 2).unwrap();
        let div_n = f.weingarten.trace();
        assert!((div_n - 2.0 / radius).abs() < 1e-10);
        // and the same sphere has kappa = -1/R under the sign convention
        assert!((f.kappa1 + 1.0 / radius).abs() < 1e-10);
    }

    fn bspline_space(p: usize, n: usize, lo: f64, hi: f64) -> SplineSpace {
        SplineSpace::new(
            KnotVector::open_uniform(lo, hi, n, p).unwrap(),
            KnotVector::open_uniform(lo, hi, n, p).unwrap(),
            None,
        )
        .unwrap()
    }

    /// Directional Hessian of shape functions against surface finite
    /// differences of their tangential gradients (chain rule in the
    /// parameter plane).
    #[test]
    fn shape_hessian_matches_gradient_differences() {
        let geom = AnalyticSurface::cylinder(3.0, 4.0);
        let space = bspline_space(3, 2, 0.5, 2.5);
        let elem = 0;
        let (r, s) = (0.9, 1.1);
        let h = 1e-5;

        let jets = frame_jets_at(&geom, r, s, 3).unwrap();
        let basis = space.eval_basis(elem, (r, s), 3).unwrap();
        let sd = ShapeDerivs::compute(&basis, &jets, 2).unwrap();

        for axis in 0..2 {
            let (rp, sp) = if axis == 0 { (r + h, s) } else { (r, s + h) };
            let (rm, sm) = if axis == 0 { (r - h, s) } else { (r, s - h) };
            let jp = frame_jets_at(&geom, rp, sp, 2).unwrap();
            let bp = space.eval_basis(elem, (rp, sp), 2).unwrap();
            let gp = ShapeDerivs::compute(&bp, &jp, 1).unwrap();
            let jm = frame_jets_at(&geom, rm, sm, 2).unwrap();
            let bm = space.eval_basis(elem, (rm, sm), 2).unwrap();
            let gm = ShapeDerivs::compute(&bm, &jm, 1).unwrap();
            let jcol = SurfaceFrame::from_jets(&jets).jac.column(axis).into_owned();
            for k in 0..sd.n_shapes() {
                let fd = (gp.grad[k] - gm.grad[k]) / (2.0 * h);
                let chain = sd.hess_dir[k] * jcol;
                let scale = chain.norm().max(1.0);
                assert!(
                    (fd - chain).norm() <= 1e-5 * scale,
                    "shape {k} axis {axis}: {:?} vs {:?}",
                    fd,
                    chain
                );
            }
        }
    }

    /// Third derivatives against finite differences of Hessian entries.
    #[test]
    fn third_derivatives_match_hessian_differences() {
        let geom = AnalyticSurface::cylinder(3.0, 4.0);
        let space = bspline_space(4, 2, 0.5, 2.5);
        let elem = 3;
        let (r, s) = (1.7, 1.6);
        let h = 1e-4;

        let jets = frame_jets_at(&geom, r, s, 4).unwrap();
        let basis = space.eval_basis(elem, (r, s), 4).unwrap();
        let sd = ShapeDerivs::compute(&basis, &jets, 3).unwrap();

        let jp = frame_jets_at(&geom, r + h, s, 3).unwrap();
        let bp = space.eval_basis(elem, (r + h, s), 3).unwrap();
        let hp = ShapeDerivs::compute(&bp, &jp, 2).unwrap();
        let jm = frame_jets_at(&geom, r - h, s, 3).unwrap();
        let bm = space.eval_basis(elem, (r - h, s), 3).unwrap();
        let hm = ShapeDerivs::compute(&bm, &jm, 2).unwrap();

        let jcol = SurfaceFrame::from_jets(&jets).jac.column(0).into_owned();
        for k in 0..sd.n_shapes() {
            for a in 0..3 {
                for b in 0..3 {
                    let fd = (hp.hess_dir[k][(a, b)] - hm.hess_dir[k][(a, b)]) / (2.0 * h);
                    let mut chain = 0.0;
                    for c in 0..3 {
                        chain += sd.d3[k][idx3(a, b, c)] * jcol[c];
                    }
                    let scale = chain.abs().max(10.0);
                    assert!(
                        (fd - chain).abs() <= 1e-4 * scale,
                        "shape {k} ({a},{b}): {fd} vs {chain}"
                    );
                }
            }
        }
    }

    /// Fourth derivatives against finite differences of third ones.
    #[test]
    fn fourth_derivatives_match_third_differences() {
        let geom = AnalyticSurface::torus(2.0, 0.6);
        let space = bspline_space(4, 2, 0.4, 1.4);
        let elem = 0;
        let (r, s) = (0.6, 0.7);
        let h = 5e-4;

        let jets = frame_jets_at(&geom, r, s, 4).unwrap();
        let basis = space.eval_basis(elem, (r, s), 4).unwrap();
        let sd = ShapeDerivs::compute(&basis, &jets, 4).unwrap();

        let eval = |rr: f64, ss: f64| {
            let j = frame_jets_at(&geom, rr, ss, 4).unwrap();
            let b = space.eval_basis(elem, (rr, ss), 4).unwrap();
            ShapeDerivs::compute(&b, &j, 3).unwrap()
        };
        let dp = eval(r + h, s);
        let dm = eval(r - h, s);
        let jcol = SurfaceFrame::from_jets(&jets).jac.column(0).into_owned();
        for k in [0usize, 7, 13] {
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        let fd = (dp.d3[k][idx3(a, b, c)] - dm.d3[k][idx3(a, b, c)]) / (2.0 * h);
                        let mut chain = 0.0;
                        for d in 0..3 {
                            chain += sd.d4[k][idx4(a, b, c, d)] * jcol[d];
                        }
                        let scale = chain.abs().max(100.0);
                        assert!(
                            (fd - chain).abs() <= 1e-3 * scale,
                            "shape {k} ({a},{b},{c}): {fd} vs {chain}"
                        );
                    }
                }
            }
        }
    }

    /// Covariant Hessian: symmetric, in-plane, and trace-invariant with
    /// the directional Hessian. Directional Hessians are asymmetric on
    /// curved patches, symmetric on flat ones.
    #[test]
    fn hessian_structure() {
        // curved: cylinder
        let geom = AnalyticSurface::cylinder(3.0, 4.0);
        let space = bspline_space(3, 2, 0.5, 2.5);
        let (r, s) = (1.2, 0.8);
        let jets = frame_jets_at(&geom, r, s, 2).unwrap();
        let basis = space.eval_basis(0, (r, s), 2).unwrap();
        let sd = ShapeDerivs::compute(&basis, &jets, 2).unwrap();
        let frame = SurfaceFrame::from_jets(&jets);
        let mut max_asym: f64 = 0.0;
        for k in 0..sd.n_shapes() {
            let hd = &sd.hess_dir[k];
            let hc = &sd.hess_cov[k];
            max_asym = max_asym.max((hd - hd.transpose()).norm());
            assert!((hc - hc.transpose()).norm() <= 1e-10 * hc.norm().max(1.0), "cov symmetric");
            assert!((hc * frame.normal).norm() <= 1e-10 * hc.norm().max(1.0), "cov in-plane");
            assert!((frame.projector * hc * frame.projector - hc).norm() <= 1e-10 * hc.norm().max(1.0));
            assert!((hd.trace() - hc.trace()).abs() <= 1e-10 * hd.norm().max(1.0), "trace invariant");
            // rows of the directional Hessian are tangential
            assert!((hd * frame.normal).norm() <= 1e-10 * hd.norm().max(1.0));
            assert_eq!(hessian_cov(hd, &frame), frame.projector * hd);
        }
        assert!(max_asym > 1e-4, "directional Hessian should be asymmetric on a cylinder");

        // flat: directional and covariant agree
        let geom = flat_tilted();
        let space = bspline_space(3, 2, 0.0, 1.0);
        let elem = space.element_containing(0.4, 0.6).unwrap();
        let jets = frame_jets_at(&geom, 0.4, 0.6, 2).unwrap();
        let basis = space.eval_basis(elem, (0.4, 0.6), 2).unwrap();
        let sd = ShapeDerivs::compute(&basis, &jets, 2).unwrap();
        for k in 0..sd.n_shapes() {
            assert!((sd.hess_dir[k] - sd.hess_cov[k]).norm() <= 1e-11 * sd.hess_dir[k].norm().max(1.0));
        }
    }

    /// On a flat patch the quartic extension x^4 has the constant fourth
    /// tangential derivative 24 in the x direction.
    #[test]
    fn flat_quartic_fourth_derivative() {
        let geom = AnalyticSurface::new(|r, s| [r, s, Jet::constant(0.0, r.order())]);
        let jets = frame_jets_at(&geom, 0.3, 0.4, 4).unwrap();
        let phi = jets.x[0].mul(&jets.x[0]).mul(&jets.x[0]).mul(&jets.x[0]);
        let g1 = jets.tangential_gradient(&phi);
        let g2 = jets.tangential_gradient(&g1[0]);
        let g3 = jets.tangential_gradient(&g2[0]);
        let g4 = jets.tangential_gradient(&g3[0]);
        assert!((g4[0].val() - 24.0).abs() < 1e-10);
    }

    /// Contracting the first two slots of the third-order tensor must
    /// reproduce the tangential gradient of tr(He_dir) computed directly.
    #[test]
    fn third_order_contraction_consistency() {
        let geom = AnalyticSurface::torus(2.0, 0.6);
        let space = bspline_space(4, 2, 0.4, 1.4);
        let (r, s) = (0.8, 0.9);
        let jets = frame_jets_at(&geom, r, s, 4).unwrap();
        let basis = space.eval_basis(0, (r, s), 4).unwrap();
        let sd = ShapeDerivs::compute(&basis, &jets, 3).unwrap();

        for k in [0usize, 5, 12] {
            // direct route: the Laplace-Beltrami field as a jet, then one
            // more tangential derivative
            let phi = &basis.jets[k];
            let g = jets.tangential_gradient(phi);
            let mut lap = Jet::zero(g[0].order() - 1);
            for a in 0..3 {
                let ga = jets.tangential_gradient(&g[a]);
                lap = lap.add(&ga[a]);
            }
            let dlap = jets.tangential_gradient(&lap);
            for c in 0..3 {
                let contracted: f64 = (0..3).map(|a| sd.d3[k][idx3(a, a, c)]).sum();
                assert!(
                    (contracted - dlap[c].val()).abs() <= 1e-10 * dlap[c].val().abs().max(1.0),
                    "slot {c}"
                );
            }
            // mixed derivative slots do not commute on curved geometry
            let mut max_swap: f64 = 0.0;
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        max_swap =
                            max_swap.max((sd.d3[k][idx3(a, b, c)] - sd.d3[k][idx3(a, c, b)]).abs());
                    }
                }
            }
            if sd.d3[k].iter().any(|v| v.abs() > 1e-6) {
                assert!(max_swap > 0.0);
            }
        }
    }

    /// Boundary frames: tangent, co-normal and normal are orthonormal
    /// and the co-normal points outward.
    #[test]
    fn boundary_frame_orthonormal() {
        let geom = AnalyticSurface::cylinder(3.0, 4.0);
        // edge s = s_max of a [0.5, 2.5]^2 domain, running along r
        let f = frame_at(&geom, 1.3, 2.5, 2).unwrap().with_boundary(0, 1.0);
        let b = f.boundary.as_ref().unwrap();
        assert!((b.tangent.norm() - 1.0).abs() < 1e-12);
        assert!((b.conormal.norm() - 1.0).abs() < 1e-12);
        assert!(b.tangent.dot(&b.conormal).abs() < 1e-12);
        assert!(b.tangent.dot(&f.normal).abs() < 1e-12);
        assert!(b.conormal.dot(&f.normal).abs() < 1e-12);
        let n_cross_t = f.normal.cross(&b.tangent);
        assert!((n_cross_t - b.conormal).norm() < 1e-12);
        // outward: positive component along the raw outward direction
        assert!(b.conormal.dot(&f.jac.column(1)) > 0.0);
    }

    #[test]
    fn degenerate_jacobian_is_reported() {
        // map collapsing the s direction
        let geom = AnalyticSurface::new(|r, s| [r, s.scale(0.0), Jet::constant(0.0, r.order())]);
        match frame_at(&geom, 0.5, 0.5, 1) {
            Err(crate::error::Error::DegenerateJacobian { .. }) => {}
            other => panic!("expected degenerate Jacobian, got {other:?}"),
        }
    }
}
