//! Element stiffness in classical curvilinear form.
//!
//! This is an independent re-derivation of the shell element used only
//! for differential testing: covariant base vectors a_alpha = x_{,alpha},
//! the metric in co-/contravariant form, membrane strains
//! eps_{ab} = (a_a . u_{,b} + a_b . u_{,a}) / 2 and the linearized change
//! of the second fundamental form as the bending strain. Everything here
//! works on parametric derivatives; none of the tangential-calculus
//! machinery of the main path is involved.

#![doc(hidden)]

use nalgebra::{DMatrix, Matrix2, Vector3};

use crate::assembly::{ElementMatrices, ShellModel};
use crate::error::Result;
use crate::geometry::GeometryMap;
use crate::nurbs::Element;
use crate::quadrature::gauss_rule_on;

/// Covariant geometry data at one integration point.
pub struct CurvilinearFrame {
    pub a1: Vector3<f64>,
    pub a2: Vector3<f64>,
    pub a3: Vector3<f64>,
    /// Covariant metric a_{alpha beta} and its inverse.
    pub metric: Matrix2<f64>,
    pub metric_inv: Matrix2<f64>,
    /// Curvature tensor b_{alpha beta} = x_{,alpha beta} . a3.
    pub curvature: Matrix2<f64>,
    /// Jacobian of the area measure, |a1 x a2|.
    pub jac: f64,
    /// Second parametric derivatives of the map.
    pub x_dd: [Vector3<f64>; 3],
}

pub fn curvilinear_frame(model: &ShellModel, r: f64, s: f64) -> Result<CurvilinearFrame> {
    let x = model.geometry.jets(r, s, 2)?;
    let v = |f: &dyn Fn(&crate::jet::Jet) -> f64| Vector3::new(f(&x[0]), f(&x[1]), f(&x[2]));
    let a1 = v(&|j| j.deriv(1, 0));
    let a2 = v(&|j| j.deriv(0, 1));
    let x_rr = v(&|j| j.deriv(2, 0));
    let x_rs = v(&|j| j.deriv(1, 1));
    let x_ss = v(&|j| j.deriv(0, 2));
    let cross = a1.cross(&a2);
    let jac = cross.norm();
    if !(jac > 1e-12 * a1.norm() * a2.norm()) {
        return Err(crate::error::Error::DegenerateJacobian {
            r,
            s,
            cross_norm: jac,
        });
    }
    let a3 = cross / jac;
    let metric = Matrix2::new(a1.dot(&a1), a1.dot(&a2), a1.dot(&a2), a2.dot(&a2));
    let det = metric[(0, 0)] * metric[(1, 1)] - metric[(0, 1)] * metric[(1, 0)];
    if !(det > 0.0) {
        return Err(crate::error::Error::DegenerateMetric(det));
    }
    let metric_inv = Matrix2::new(metric[(1, 1)], -metric[(0, 1)], -metric[(0, 1)], metric[(0, 0)]) / det;
    let curvature = Matrix2::new(
        x_rr.dot(&a3),
        x_rs.dot(&a3),
        x_rs.dot(&a3),
        x_ss.dot(&a3),
    );
    Ok(CurvilinearFrame {
        a1,
        a2,
        a3,
        metric,
        metric_inv,
        curvature,
        jac,
        x_dd: [x_rr, x_rs, x_ss],
    })
}

/// Element stiffness computed entirely in curvilinear quantities, in the
/// same local blocked dof layout as the tangential-calculus routine.
pub fn element_stiffness_classical(
    model: &ShellModel,
    elem: &Element,
    quad_points: usize,
) -> Result<ElementMatrices> {
    let space = &model.space;
    let rule = gauss_rule_on(quad_points, elem.r0, elem.r1, elem.s0, elem.s1)?;
    let basis0 = space.eval_basis(elem.id, rule.points[0], 2)?;
    let n_sh = basis0.n_shapes();
    let indices = basis0.indices.clone();
    let mat = &model.material;
    let nu = mat.poisson;
    let memb_scale = mat.youngs * mat.thickness / (1.0 - nu * nu);
    let bend_scale = mat.flexural_rigidity();

    let mut k_m = DMatrix::zeros(3 * n_sh, 3 * n_sh);
    let mut k_b = DMatrix::zeros(3 * n_sh, 3 * n_sh);

    for (q, &(r, s)) in rule.points.iter().enumerate() {
        let cf = curvilinear_frame(model, r, s)?;
        let basis = if q == 0 {
            basis0.clone()
        } else {
            space.eval_basis(elem.id, (r, s), 2)?
        };
        let dv = rule.weights[q] * cf.jac;

        // per-dof strain tensors in covariant components
        let ndof = 3 * n_sh;
        let mut eps = vec![Matrix2::<f64>::zeros(); ndof];
        let mut kap = vec![Matrix2::<f64>::zeros(); ndof];
        let a = [cf.a1, cf.a2];
        for k in 0..n_sh {
            let dn = [basis.deriv(k, 1, 0), basis.deriv(k, 0, 1)];
            let ddn = Matrix2::new(
                basis.deriv(k, 2, 0),
                basis.deriv(k, 1, 1),
                basis.deriv(k, 1, 1),
                basis.deriv(k, 0, 2),
            );
            for c in 0..3 {
                let e_c = Vector3::from_fn(|i, _| if i == c { 1.0 } else { 0.0 });
                let dof = c * n_sh + k;
                // membrane: eps_ab = (a_a . u_{,b} + a_b . u_{,a}) / 2
                for al in 0..2 {
                    for be in 0..2 {
                        eps[dof][(al, be)] =
                            0.5 * (a[al][c] * dn[be] + a[be][c] * dn[al]);
                    }
                }
                // linearized normal: delta a3 = P (u_{,1} x a2 + a1 x u_{,2}) / j
                let raw = e_c.cross(&cf.a2) * dn[0] + cf.a1.cross(&e_c) * dn[1];
                let dn3 = (raw - cf.a3 * cf.a3.dot(&raw)) / cf.jac;
                // bending: kappa_ab = -(a3 . u_{,ab} + x_{,ab} . delta a3)
                let xdd = [
                    [cf.x_dd[0], cf.x_dd[1]],
                    [cf.x_dd[1], cf.x_dd[2]],
                ];
                for al in 0..2 {
                    for be in 0..2 {
                        kap[dof][(al, be)] =
                            -(cf.a3[c] * ddn[(al, be)] + xdd[al][be].dot(&dn3));
                    }
                }
            }
        }

        // contravariant plane-stress elasticity:
        // H^{abgd} = nu A^{ab} A^{gd} + (1 - nu)/2 (A^{ag} A^{bd} + A^{ad} A^{bg})
        let ai = &cf.metric_inv;
        let stress = |e: &Matrix2<f64>| -> Matrix2<f64> {
            let aiea = ai * e * ai; // A^{ag} e_{gd} A^{db}
            let tr = (ai * e).trace();
            let mut out = Matrix2::zeros();
            for alpha in 0..2 {
                for beta in 0..2 {
                    out[(alpha, beta)] = nu * ai[(alpha, beta)] * tr
                        + (1.0 - nu) * aiea[(alpha, beta)];
                }
            }
            out
        };

        for i in 0..ndof {
            let sig_m = stress(&eps[i]);
            let sig_b = stress(&kap[i]);
            for j in 0..ndof {
                let mut em = 0.0;
                let mut eb = 0.0;
                for al in 0..2 {
                    for be in 0..2 {
                        em += sig_m[(al, be)] * eps[j][(al, be)];
                        eb += sig_b[(al, be)] * kap[j][(al, be)];
                    }
                }
                k_m[(i, j)] += memb_scale * dv * em;
                k_b[(i, j)] += bend_scale * dv * eb;
            }
        }
    }

    Ok(ElementMatrices {
        k_membrane: k_m,
        k_bending: k_b,
        f: nalgebra::DVector::zeros(3 * n_sh),
        indices,
    })
}
