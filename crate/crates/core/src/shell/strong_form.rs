//! The equilibrium operator in strong form,
//! L(u) = div n~ + n div(P div m) + 2 H div m + [dGamma_i H]_{jk} [m]_{ki},
//! so that equilibrium reads L(u) = -f. Requires fourth-order directional
//! derivatives of the displacement field.

use nalgebra::{Matrix3, Vector3};

use super::field::FieldJets;
use super::material::Material;
use super::resultants::{divergence_jets, effective_normal_jets, jet_matrix_vals, moment_jets};
use crate::error::{Error, Result};
use crate::tdc::FrameJets;

pub fn strong_form(field: &FieldJets, frame: &FrameJets, material: &Material) -> Result<Vector3<f64>> {
    if field.order() < 4 {
        return Err(Error::InsufficientDerivatives {
            required: 4,
            available: field.order(),
        });
    }
    if frame.order() < 4 {
        return Err(Error::InsufficientDerivatives {
            required: 4,
            available: frame.order(),
        });
    }

    // membrane term: div n~
    let n_jets = effective_normal_jets(field, frame, material);
    let div_n = divergence_jets(&n_jets, frame);
    let div_n = Vector3::new(div_n[0].val(), div_n[1].val(), div_n[2].val());

    // bending terms through the moment tensor
    let m_jets = moment_jets(field, frame, material);
    let m = jet_matrix_vals(&m_jets);
    let div_m_jets = divergence_jets(&m_jets, frame);
    let div_m = Vector3::new(div_m_jets[0].val(), div_m_jets[1].val(), div_m_jets[2].val());

    // q = P div m as jets, then its divergence
    let ord = div_m_jets[0].order();
    let mut q_jets = [crate::jet::Jet::zero(ord); 3];
    for i in 0..3 {
        for k in 0..3 {
            q_jets[i] = q_jets[i].add(&frame.p[i][k].truncated(ord).mul(&div_m_jets[k]));
        }
    }
    let mut div_q = 0.0;
    for (i, q) in q_jets.iter().enumerate() {
        let g = frame.tangential_gradient(q);
        div_q += g[i].val();
    }

    let h = Matrix3::from_fn(|i, j| frame.h.as_ref().unwrap()[i][j].val());
    let normal = Vector3::new(frame.n[0].val(), frame.n[1].val(), frame.n[2].val());

    // curvature-gradient contraction: out_j = [dGamma_i H]_{jk} m_{ki}
    let dh = frame.weingarten_derivs();
    let mut curv = Vector3::zeros();
    for j in 0..3 {
        for i in 0..3 {
            for k in 0..3 {
                curv[j] += dh[i][(j, k)] * m[(k, i)];
            }
        }
    }

    Ok(div_n + normal * div_q + h * div_m * 2.0 + curv)
}
