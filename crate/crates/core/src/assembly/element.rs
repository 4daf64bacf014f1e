//! Element stiffness matrices and consistent load vectors.
//!
//! The membrane part integrates P_{ib} [K^]_{bj} with
//! [K^]_{kj} = mu (delta_{kj} N_{,a} N_{,a}^T + N_{,j} N_{,k}^T)
//!           + lambda N_{,k} N_{,j}^T
//! over tangential first derivatives of the shape functions. The bending
//! part integrates D_B n_i n_j K~ over second derivatives; K~ exists in
//! two algebraically equivalent forms (covariant Hessians, or directional
//! Hessians with one projector contraction) and both are implemented.

use nalgebra::{DMatrix, DVector};

use super::{Load, ShellModel};
use crate::error::Result;
use crate::geometry::GeometryMap;
use crate::nurbs::Element;
use crate::quadrature::gauss_rule_on;
use crate::tdc::{FrameJets, ShapeDerivs};

/// Which algebraic form of the bending kernel K~ to integrate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BendingForm {
    /// (1 - nu) P_{ea} N^dir_{,ab} N^dir_{,be} + nu Laplacians; the
    /// production path (only directional derivatives needed).
    Directional,
    /// (1 - nu) N^cov_{,ab} N^cov_{,ab} + nu Laplacians; retained as the
    /// stated-equivalent cross-check.
    Covariant,
}

/// Element contribution in the local blocked layout: local dof
/// (component c, shape k) = c * n_shapes + k.
pub struct ElementMatrices {
    pub k_membrane: DMatrix<f64>,
    pub k_bending: DMatrix<f64>,
    pub f: DVector<f64>,
    /// Global basis indices of the element's shape functions.
    pub indices: Vec<usize>,
}

impl ElementMatrices {
    pub fn stiffness(&self) -> DMatrix<f64> {
        &self.k_membrane + &self.k_bending
    }
}

/// Integrate the element stiffness over an n x n Gauss rule.
pub fn element_stiffness(
    model: &ShellModel,
    elem: &Element,
    quad_points: usize,
    form: BendingForm,
) -> Result<ElementMatrices> {
    let space = &model.space;
    let rule = gauss_rule_on(quad_points, elem.r0, elem.r1, elem.s0, elem.s1)?;
    let basis0 = space.eval_basis(elem.id, rule.points[0], 2)?;
    let n_sh = basis0.n_shapes();
    let indices = basis0.indices.clone();

    let mut k_m = DMatrix::zeros(3 * n_sh, 3 * n_sh);
    let mut k_b = DMatrix::zeros(3 * n_sh, 3 * n_sh);
    let mut f = DVector::zeros(3 * n_sh);

    let mat = &model.material;
    let (mu, lambda, t) = (mat.mu(), mat.lambda(), mat.thickness);
    let d_b = mat.flexural_rigidity();

    for (q, &(r, s)) in rule.points.iter().enumerate() {
        let frame = FrameJets::build(model.geometry.jets(r, s, 2)?, (r, s))?;
        let basis = if q == 0 {
            basis0.clone()
        } else {
            space.eval_basis(elem.id, (r, s), 2)?
        };
        let sd = ShapeDerivs::compute(&basis, &frame, 2)?;
        let dv = rule.weights[q] * frame.area_density.val();

        let p = nalgebra::Matrix3::from_fn(|i, j| frame.p[i][j].val());
        let n = nalgebra::Vector3::new(frame.n[0].val(), frame.n[1].val(), frame.n[2].val());

        // membrane: with P grad = grad, P_{ib} K^_{bj} collapses to
        // mu P_{ij} S + mu c_j c_i^T + lambda c_i c_j^T, S = sum_a c_a c_a^T
        let mut cols = [DVector::<f64>::zeros(n_sh), DVector::zeros(n_sh), DVector::zeros(n_sh)];
        for k in 0..n_sh {
            for a in 0..3 {
                cols[a][k] = sd.grad[k][a];
            }
        }
        let mut s_mat = DMatrix::<f64>::zeros(n_sh, n_sh);
        for a in 0..3 {
            s_mat.ger(1.0, &cols[a], &cols[a], 1.0);
        }
        for i in 0..3 {
            for j in 0..3 {
                let c_iso = t * dv * mu * p[(i, j)];
                for a in 0..n_sh {
                    for b in 0..n_sh {
                        k_m[(i * n_sh + a, j * n_sh + b)] += c_iso * s_mat[(a, b)]
                            + t * dv * (mu * cols[j][a] * cols[i][b] + lambda * cols[i][a] * cols[j][b]);
                    }
                }
            }
        }

        // bending kernel K~
        let mut ktilde = DMatrix::<f64>::zeros(n_sh, n_sh);
        match form {
            BendingForm::Directional => {
                for k in 0..n_sh {
                    for l in 0..n_sh {
                        let mut tr = 0.0;
                        for i in 0..3 {
                            for j in 0..3 {
                                tr += sd.hess_cov[k][(i, j)] * sd.hess_dir[l][(j, i)];
                            }
                        }
                        ktilde[(k, l)] = (1.0 - mat.poisson) * tr
                            + mat.poisson * sd.hess_dir[k].trace() * sd.hess_dir[l].trace();
                    }
                }
            }
            BendingForm::Covariant => {
                for k in 0..n_sh {
                    for l in 0..n_sh {
                        let mut fro = 0.0;
                        for i in 0..3 {
                            for j in 0..3 {
                                fro += sd.hess_cov[k][(i, j)] * sd.hess_cov[l][(i, j)];
                            }
                        }
                        ktilde[(k, l)] = (1.0 - mat.poisson) * fro
                            + mat.poisson * sd.hess_cov[k].trace() * sd.hess_cov[l].trace();
                    }
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                let c = d_b * dv * n[i] * n[j];
                if c != 0.0 {
                    for a in 0..n_sh {
                        for b in 0..n_sh {
                            k_b[(i * n_sh + a, j * n_sh + b)] += c * ktilde[(a, b)];
                        }
                    }
                }
            }
        }

        // consistent load
        let fv = model.load.eval(r, s);
        for c in 0..3 {
            if fv[c] != 0.0 {
                for k in 0..n_sh {
                    f[c * n_sh + k] += dv * fv[c] * basis.value(k);
                }
            }
        }
    }

    Ok(ElementMatrices {
        k_membrane: k_m,
        k_bending: k_b,
        f,
        indices,
    })
}

/// Consistent load vector alone (same quadrature as the stiffness).
pub fn element_load(
    space: &crate::nurbs::SplineSpace,
    geometry: &crate::geometry::Geometry,
    elem: &Element,
    load: &Load,
    quad_points: usize,
) -> Result<(DVector<f64>, Vec<usize>)> {
    let rule = gauss_rule_on(quad_points, elem.r0, elem.r1, elem.s0, elem.s1)?;
    let basis0 = space.eval_basis(elem.id, rule.points[0], 0)?;
    let n_sh = basis0.n_shapes();
    let indices = basis0.indices.clone();
    let mut f = DVector::zeros(3 * n_sh);
    for (q, &(r, s)) in rule.points.iter().enumerate() {
        let basis = if q == 0 {
            basis0.clone()
        } else {
            space.eval_basis(elem.id, (r, s), 0)?
        };
        let frame = FrameJets::build(geometry.jets(r, s, 1)?, (r, s))?;
        let dv = rule.weights[q] * frame.area_density.val();
        let fv = load.eval(r, s);
        for c in 0..3 {
            for k in 0..n_sh {
                f[c * n_sh + k] += dv * fv[c] * basis.value(k);
            }
        }
    }
    Ok((f, indices))
}

/// u^T K u over one element, with u in the local blocked layout.
pub fn element_energy(em: &ElementMatrices, u_local: &DVector<f64>) -> f64 {
    let k = em.stiffness();
    (u_local.transpose() * k * u_local)[(0, 0)]
}
