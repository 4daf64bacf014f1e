//! Thickness-pre-integrated stress resultants in global coordinates.

use nalgebra::{Matrix3, Vector3};

use super::field::FieldJets;
use super::kinematics::{directional_gradient_jets, normal_hessian_jets};
use super::material::Material;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::tdc::FrameJets;

/// Stress resultants at a surface point.
#[derive(Clone, Debug)]
pub struct StressResultants {
    /// Moment tensor m_Gamma; symmetric, in-plane.
    pub moment: Matrix3<f64>,
    /// Effective normal-force tensor n~_Gamma; symmetric, in-plane.
    pub effective_normal: Matrix3<f64>,
    /// Physical normal-force tensor n~ + H m; in-plane, not symmetric.
    pub physical_normal: Matrix3<f64>,
    /// Transverse shear q = P div m.
    pub shear: Vector3<f64>,
    /// Nonzero eigenvalues of the moment tensor, descending.
    pub principal_moments: [f64; 2],
    /// Nonzero eigenvalues of the effective normal-force tensor.
    pub principal_forces: [f64; 2],
}

/// Moment tensor entries as jets: m = P m_dir P with
/// m_dir = -D_B [(1 - nu) sym(Hdn) + nu tr(Hdn) I].
pub(crate) fn moment_jets(
    field: &FieldJets,
    frame: &FrameJets,
    material: &Material,
) -> [[Jet; 3]; 3] {
    let ord = field.order() - 2;
    let hdn = normal_hessian_jets(field, frame);
    let nu = material.poisson;
    let db = material.flexural_rigidity();
    let mut trace = Jet::zero(ord);
    for i in 0..3 {
        trace = trace.add(&hdn[i][i]);
    }
    let mut m_dir = [[Jet::zero(ord); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let sym = hdn[i][j].add(&hdn[j][i]).scale(0.5 * (1.0 - nu));
            let mut v = sym;
            if i == j {
                v = v.add(&trace.scale(nu));
            }
            m_dir[i][j] = v.scale(-db);
        }
    }
    sandwich_with_projector(&m_dir, frame, ord)
}

/// Effective normal-force entries as jets:
/// n~ = P [2 mu sym(grad_dir u) + lambda tr I] P scaled by thickness.
pub(crate) fn effective_normal_jets(
    field: &FieldJets,
    frame: &FrameJets,
    material: &Material,
) -> [[Jet; 3]; 3] {
    let g = directional_gradient_jets(field, frame);
    let ord = field.order() - 1;
    let (mu, lambda, t) = (material.mu(), material.lambda(), material.thickness);
    let mut trace = Jet::zero(ord);
    for i in 0..3 {
        trace = trace.add(&g[i][i]);
    }
    let mut n_dir = [[Jet::zero(ord); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut v = g[i][j].add(&g[j][i]).scale(mu);
            if i == j {
                v = v.add(&trace.scale(lambda));
            }
            n_dir[i][j] = v.scale(t);
        }
    }
    sandwich_with_projector(&n_dir, frame, ord)
}

fn sandwich_with_projector(a: &[[Jet; 3]; 3], frame: &FrameJets, ord: usize) -> [[Jet; 3]; 3] {
    let p: Vec<Vec<Jet>> = (0..3)
        .map(|i| (0..3).map(|j| frame.p[i][j].truncated(ord.min(frame.p[i][j].order()))).collect())
        .collect();
    let mut pa = [[Jet::zero(ord); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = Jet::zero(ord);
            for k in 0..3 {
                acc = acc.add(&p[i][k].mul(&a[k][j]));
            }
            pa[i][j] = acc;
        }
    }
    let mut pap = [[Jet::zero(ord); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = Jet::zero(ord);
            for k in 0..3 {
                acc = acc.add(&pa[i][k].mul(&p[k][j]));
            }
            pap[i][j] = acc;
        }
    }
    pap
}

pub(crate) fn jet_matrix_vals(m: &[[Jet; 3]; 3]) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| m[i][j].val())
}

/// Row-wise surface divergence of a jet tensor: (div A)_j = dGamma_i A_{ji}.
pub(crate) fn divergence_jets(a: &[[Jet; 3]; 3], frame: &FrameJets) -> [Jet; 3] {
    let ord = a[0][0].order() - 1;
    let mut out = [Jet::zero(ord); 3];
    for j in 0..3 {
        for i in 0..3 {
            let g = frame.tangential_gradient(&a[j][i]);
            out[j] = out[j].add(&g[i]);
        }
    }
    out
}

/// All stress resultants at a point. Needs field jets of order >= 3
/// (third directional derivatives enter the shear force).
pub fn stress_resultants(
    field: &FieldJets,
    frame: &FrameJets,
    material: &Material,
) -> Result<StressResultants> {
    if field.order() < 3 {
        return Err(Error::InsufficientDerivatives {
            required: 3,
            available: field.order(),
        });
    }
    let m_jets = moment_jets(field, frame, material);
    let moment = jet_matrix_vals(&m_jets);
    let effective_normal = jet_matrix_vals(&effective_normal_jets(field, frame, material));

    let h = Matrix3::from_fn(|i, j| frame.h.as_ref().expect("order >= 2")[i][j].val());
    let physical_normal = effective_normal + h * moment;

    let div_m = divergence_jets(&m_jets, frame);
    let p = Matrix3::from_fn(|i, j| frame.p[i][j].val());
    let shear = p * Vector3::new(div_m[0].val(), div_m[1].val(), div_m[2].val());

    let n = Vector3::new(frame.n[0].val(), frame.n[1].val(), frame.n[2].val());
    Ok(StressResultants {
        moment,
        effective_normal,
        physical_normal,
        shear,
        principal_moments: in_plane_eigenvalues(&moment, &n),
        principal_forces: in_plane_eigenvalues(&effective_normal, &n),
    })
}

/// Nonzero eigenvalues of a symmetric in-plane tensor, descending. The
/// eigenpair whose eigenvector aligns with the normal (|v . n| > 0.99)
/// is the structural zero and is discarded.
pub fn in_plane_eigenvalues(tensor: &Matrix3<f64>, normal: &Vector3<f64>) -> [f64; 2] {
    let sym = (tensor + tensor.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(sym);
    let mut kept = Vec::with_capacity(2);
    let mut dropped_best: Option<(f64, usize)> = None;
    for k in 0..3 {
        let align = eig.eigenvectors.column(k).dot(normal).abs();
        if align > 0.99 {
            // keep track in case several align (degenerate); drop only one
            match dropped_best {
                Some((a, _)) if a >= align => kept.push(eig.eigenvalues[k]),
                Some((_, prev)) => {
                    kept.push(eig.eigenvalues[prev]);
                    dropped_best = Some((align, k));
                }
                None => dropped_best = Some((align, k)),
            }
        } else {
            kept.push(eig.eigenvalues[k]);
        }
    }
    while kept.len() > 2 {
        kept.pop();
    }
    if kept.len() < 2 {
        kept.resize(2, 0.0);
    }
    kept.sort_by(|a, b| b.partial_cmp(a).unwrap());
    [kept[0], kept[1]]
}
