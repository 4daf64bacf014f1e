//! Tangential derivatives of shape functions through order four.
//!
//! Higher-order surface derivatives are produced by repeatedly applying
//! the first-order tangential derivative operator in global coordinates.
//! Mixed directional derivatives do not commute on curved surfaces, so
//! the order-3 and order-4 tensors are stored fully unsymmetrized
//! (27 and 81 entries per shape function).

use nalgebra::{Matrix3, Vector3};

use super::frame::FrameJets;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::nurbs::BasisEval;

/// Index into the unsymmetrized order-3 tensor: entry (a, b, c) is
/// dGamma_c dGamma_b dGamma_a N.
#[inline]
pub const fn idx3(a: usize, b: usize, c: usize) -> usize {
    (a * 3 + b) * 3 + c
}

/// Index into the order-4 tensor: entry (a, b, c, d) is
/// dGamma_d dGamma_c dGamma_b dGamma_a N.
#[inline]
pub const fn idx4(a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * 3 + b) * 3 + c) * 3 + d
}

/// Tangential derivatives of every shape function on an element at one
/// integration point.
pub struct ShapeDerivs {
    /// Derivative depth actually computed (1, 2, 3 or 4).
    pub order: usize,
    /// grad_Gamma N_k.
    pub grad: Vec<Vector3<f64>>,
    /// Directional Hessians, entry (i, j) = dGamma_j dGamma_i N_k.
    /// Rows are tangential (He n = 0); the matrix is not symmetric on
    /// curved geometry.
    pub hess_dir: Vec<Matrix3<f64>>,
    /// Covariant Hessians P He_dir; symmetric in-plane.
    pub hess_cov: Vec<Matrix3<f64>>,
    pub d3: Vec<[f64; 27]>,
    pub d4: Vec<[f64; 81]>,
}

impl ShapeDerivs {
    /// Compute derivatives through `order` from basis jets and the frame.
    /// The basis must carry jets of at least the same order.
    pub fn compute(basis: &BasisEval, frame: &FrameJets, order: usize) -> Result<Self> {
        if basis.d_max < order {
            return Err(Error::InsufficientDerivatives {
                required: order,
                available: basis.d_max,
            });
        }
        if frame.order() < order.min(2) {
            return Err(Error::InsufficientDerivatives {
                required: order,
                available: frame.order(),
            });
        }
        let n = basis.n_shapes();
        let mut grad = Vec::with_capacity(n);
        let mut hess_dir = Vec::with_capacity(n);
        let mut hess_cov = Vec::with_capacity(n);
        let mut d3 = Vec::new();
        let mut d4 = Vec::new();

        let p_val = {
            let mut m = Matrix3::zeros();
            for i in 0..3 {
                for j in 0..3 {
                    m[(i, j)] = frame.p[i][j].val();
                }
            }
            m
        };

        for k in 0..n {
            let phi = &basis.jets[k];
            let g = frame.tangential_gradient(phi);
            grad.push(Vector3::new(g[0].val(), g[1].val(), g[2].val()));
            if order < 2 {
                continue;
            }

            let mut t2 = [[Jet::zero(0); 3]; 3];
            let mut hd = Matrix3::zeros();
            for a in 0..3 {
                let ga = frame.tangential_gradient(&g[a]);
                for b in 0..3 {
                    hd[(a, b)] = ga[b].val();
                    t2[a][b] = ga[b];
                }
            }
            hess_dir.push(hd);
            hess_cov.push(p_val * hd);

            if order >= 3 {
                let mut t3 = [[[Jet::zero(0); 3]; 3]; 3];
                let mut v3 = [0.0; 27];
                for a in 0..3 {
                    for b in 0..3 {
                        let gb = frame.tangential_gradient(&t2[a][b]);
                        for c in 0..3 {
                            v3[idx3(a, b, c)] = gb[c].val();
                            t3[a][b][c] = gb[c];
                        }
                    }
                }
                d3.push(v3);

                if order >= 4 {
                    let mut v4 = [0.0; 81];
                    for a in 0..3 {
                        for b in 0..3 {
                            for c in 0..3 {
                                let gc = frame.tangential_gradient(&t3[a][b][c]);
                                for d in 0..3 {
                                    v4[idx4(a, b, c, d)] = gc[d].val();
                                }
                            }
                        }
                    }
                    d4.push(v4);
                }
            }
        }

        Ok(ShapeDerivs {
            order,
            grad,
            hess_dir,
            hess_cov,
            d3,
            d4,
        })
    }

    pub fn n_shapes(&self) -> usize {
        self.grad.len()
    }
}
