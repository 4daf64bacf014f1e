//! Pointwise tangential operators on plain values.

use nalgebra::{Matrix3, Vector3};

use super::frame::SurfaceFrame;
use crate::nurbs::BasisEval;

/// Tangential gradients of all shape functions: grad_Gamma N = Q grad_r N.
pub fn tangential_gradient_scalar(basis: &BasisEval, frame: &SurfaceFrame) -> Vec<Vector3<f64>> {
    (0..basis.n_shapes())
        .map(|k| {
            let dr = basis.deriv(k, 1, 0);
            let ds = basis.deriv(k, 0, 1);
            frame.q.column(0) * dr + frame.q.column(1) * ds
        })
        .collect()
}

/// Covariant Hessian from the directional one: He_cov = P He_dir.
pub fn hessian_cov(hess_dir: &Matrix3<f64>, frame: &SurfaceFrame) -> Matrix3<f64> {
    frame.projector * hess_dir
}

/// Surface divergence of a vector field from its directional gradient
/// (grad_dir v)_{ij} = dGamma_j v_i.
pub fn surface_divergence_vector(grad_dir: &Matrix3<f64>) -> f64 {
    grad_dir.trace()
}

/// Surface divergence of a tensor field from its three partial tangential
/// derivatives `d_tensor[k] = dGamma_k A`; applied row-wise:
/// (div A)_j = dGamma_i A_{ji}.
pub fn surface_divergence_tensor(d_tensor: &[Matrix3<f64>; 3]) -> Vector3<f64> {
    let mut out = Vector3::zeros();
    for j in 0..3 {
        for i in 0..3 {
            out[j] += d_tensor[i][(j, i)];
        }
    }
    out
}
