//! Kirchhoff-Love kinematics: difference vector and the membrane/bending
//! strain split, in directional and covariant variants.

use nalgebra::{Matrix3, Vector3};

use super::field::FieldJets;
use crate::jet::Jet;
use crate::tdc::FrameJets;

/// Directional gradient (grad_dir u)_{ij} = dGamma_j u_i as jets,
/// one order below the field.
pub fn directional_gradient_jets(field: &FieldJets, frame: &FrameJets) -> [[Jet; 3]; 3] {
    let ord = field.order() - 1;
    let mut out = [[Jet::zero(ord); 3]; 3];
    for i in 0..3 {
        let g = frame.tangential_gradient(&field.u[i]);
        out[i] = g;
    }
    out
}

pub fn jet_matrix_values(m: &[[Jet; 3]; 3]) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| m[i][j].val())
}

/// Second directional derivatives dotted with the normal,
/// (Hdn)_{ij} = u^dir_{,ij} . n as jets (two orders below the field).
pub fn normal_hessian_jets(field: &FieldJets, frame: &FrameJets) -> [[Jet; 3]; 3] {
    let ord = field.order() - 2;
    let mut out = [[Jet::zero(ord); 3]; 3];
    for c in 0..3 {
        let g = frame.tangential_gradient(&field.u[c]);
        for i in 0..3 {
            let gi = frame.tangential_gradient(&g[i]);
            for j in 0..3 {
                let n_c = frame.n[c].truncated(ord);
                out[i][j] = out[i][j].add(&gi[j].mul(&n_c));
            }
        }
    }
    out
}

/// The difference vector w = -[grad_dir u + (grad_dir u)^T] . n
/// = H u - grad_Gamma(u . n); tangential by construction.
pub fn difference_vector(field: &FieldJets, frame: &FrameJets) -> Vector3<f64> {
    // (grad_dir u) n vanishes identically (rows are tangential), so only
    // the transpose term contributes: w_j = -sum_i n_i dGamma_j u_i
    let g = directional_gradient_jets(field, frame);
    let n = Vector3::new(frame.n[0].val(), frame.n[1].val(), frame.n[2].val());
    let mut w = Vector3::zeros();
    for j in 0..3 {
        for i in 0..3 {
            w[j] -= n[i] * g[i][j].val();
        }
    }
    w
}

/// Same quantity through the identity H u - grad_Gamma(u . n); used as a
/// cross-check of the kinematics.
pub fn difference_vector_via_identity(field: &FieldJets, frame: &FrameJets) -> Vector3<f64> {
    let ord = field.order() - 1;
    let mut udotn = Jet::zero(ord + 1);
    for c in 0..3 {
        udotn = udotn.add(&field.u[c].truncated(ord + 1).mul(&frame.n[c].truncated(ord)));
    }
    // H u
    let h = frame.h.as_ref().expect("frame order >= 2");
    let uval = field.value();
    let mut hu = Vector3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            hu[i] += h[i][j].val() * uval[j];
        }
    }
    let g = frame.tangential_gradient(&udotn);
    hu - Vector3::new(g[0].val(), g[1].val(), g[2].val())
}

/// Membrane and bending strains, directional and covariant variants.
#[derive(Clone, Debug)]
pub struct Strains {
    pub membrane_dir: Matrix3<f64>,
    pub membrane_cov: Matrix3<f64>,
    pub bending_dir: Matrix3<f64>,
    pub bending_cov: Matrix3<f64>,
}

pub fn strains(field: &FieldJets, frame: &FrameJets) -> Strains {
    let g = jet_matrix_values(&directional_gradient_jets(field, frame));
    let p = Matrix3::from_fn(|i, j| frame.p[i][j].val());
    let membrane_dir = (g + g.transpose()) * 0.5;
    let membrane_cov = p * membrane_dir * p;

    let hdn = jet_matrix_values(&normal_hessian_jets(field, frame));
    let bending_dir = -(hdn + hdn.transpose()) * 0.5;
    let bending_cov = p * bending_dir * p;

    Strains {
        membrane_dir,
        membrane_cov,
        bending_dir,
        bending_cov,
    }
}
