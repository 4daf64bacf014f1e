//! Boundary force and rotation decomposition along patch edges.

use nalgebra::Vector3;

use super::field::FieldJets;
use super::kinematics::difference_vector;
use super::material::Material;
use super::resultants::{divergence_jets, effective_normal_jets, jet_matrix_vals, moment_jets};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::tdc::frame::{jet_cross, jet_dot};
use crate::tdc::FrameJets;

/// Which parametric direction runs along the edge and the sign of the
/// other direction pointing out of the domain.
#[derive(Clone, Copy, Debug)]
pub struct EdgeContext {
    pub along_axis: usize,
    pub outward_sign: f64,
}

/// Boundary tractions, moments, and rotations at one edge point,
/// decomposed in the (t, n_conormal, n) triad.
#[derive(Clone, Debug)]
pub struct BoundaryForces {
    pub tangent: Vector3<f64>,
    pub conormal: Vector3<f64>,
    /// Raw decomposition of n_real . n_conormal and the shear resultant.
    pub p_t: f64,
    pub p_conormal: f64,
    pub p_normal: f64,
    /// Bending moments along the edge.
    pub m_t: f64,
    pub m_conormal: f64,
    /// Rotations of the displacement field at the edge.
    pub omega_t: f64,
    pub omega_conormal: f64,
    /// Effective (Kirchhoff) boundary forces.
    pub eff_p_t: f64,
    pub eff_p_conormal: f64,
    pub eff_p_normal: f64,
}

/// Jets of the edge tangent and outward co-normal fields near the edge.
pub(crate) fn edge_triad_jets(frame: &FrameJets, edge: EdgeContext) -> ([Jet; 3], [Jet; 3]) {
    let t_raw = if edge.along_axis == 0 { &frame.j_r } else { &frame.j_s };
    let o_raw = if edge.along_axis == 0 { &frame.j_s } else { &frame.j_r };
    let o_raw = [
        o_raw[0].scale(edge.outward_sign),
        o_raw[1].scale(edge.outward_sign),
        o_raw[2].scale(edge.outward_sign),
    ];
    let t_norm = jet_dot(t_raw, t_raw).sqrt();
    let t_unit = [
        t_raw[0].div(&t_norm),
        t_raw[1].div(&t_norm),
        t_raw[2].div(&t_norm),
    ];
    let proj = jet_dot(&o_raw, &t_unit);
    let mut o_perp = [Jet::zero(t_norm.order()); 3];
    for i in 0..3 {
        o_perp[i] = o_raw[i].sub(&proj.mul(&t_unit[i]));
    }
    let o_norm = jet_dot(&o_perp, &o_perp).sqrt();
    let conormal = [
        o_perp[0].div(&o_norm),
        o_perp[1].div(&o_norm),
        o_perp[2].div(&o_norm),
    ];
    // orient the tangent so that conormal = n x tangent
    let tangent = jet_cross(&conormal, &frame.n);
    (tangent, conormal)
}

/// Full decomposition at a boundary point. Needs field jets of order
/// >= 3 (the effective normal force contains the tangential derivative
/// of the twisting moment).
pub fn boundary_forces(
    field: &FieldJets,
    frame: &FrameJets,
    edge: EdgeContext,
    material: &Material,
) -> Result<BoundaryForces> {
    if field.order() < 3 {
        return Err(Error::InsufficientDerivatives {
            required: 3,
            available: field.order(),
        });
    }
    let (t_jets, c_jets) = edge_triad_jets(frame, edge);
    let tangent = Vector3::new(t_jets[0].val(), t_jets[1].val(), t_jets[2].val());
    let conormal = Vector3::new(c_jets[0].val(), c_jets[1].val(), c_jets[2].val());
    let h = nalgebra::Matrix3::from_fn(|i, j| frame.h.as_ref().unwrap()[i][j].val());

    // m . n_conormal as jets (the twisting component needs one tangential
    // derivative along the edge)
    let m_jets = moment_jets(field, frame, material);
    let ord = m_jets[0][0].order();
    let mut m_nc = [Jet::zero(ord); 3];
    for i in 0..3 {
        for k in 0..3 {
            m_nc[i] = m_nc[i].add(&m_jets[i][k].mul(&c_jets[k].truncated(ord.min(c_jets[k].order()))));
        }
    }
    let m_t = {
        let mut v = 0.0;
        for i in 0..3 {
            v += m_nc[i].val() * conormal[i];
        }
        v
    };
    let m_conormal_jet = {
        let mut acc = Jet::zero(ord.min(t_jets[0].order()));
        for i in 0..3 {
            acc = acc.add(&m_nc[i].truncated(acc.order()).mul(&t_jets[i].truncated(acc.order())));
        }
        acc
    };
    let m_conormal = m_conormal_jet.val();

    // physical normal force and shear
    let n_eff = jet_matrix_vals(&effective_normal_jets(field, frame, material));
    let m_val = jet_matrix_vals(&m_jets);
    let n_real = n_eff + h * m_val;
    let div_m = divergence_jets(&m_jets, frame);
    let p_mat = nalgebra::Matrix3::from_fn(|i, j| frame.p[i][j].val());
    let q = p_mat * Vector3::new(div_m[0].val(), div_m[1].val(), div_m[2].val());

    let traction = n_real * conormal;
    let p_t = traction.dot(&tangent);
    let p_conormal = traction.dot(&conormal);
    let p_normal = q.dot(&conormal);

    // rotations of the field at the edge
    let w = difference_vector(field, frame);
    let omega_t = w.dot(&conormal);
    let omega_conormal = w.dot(&tangent);

    // effective forces: curvature couplings and the tangential derivative
    // of the twisting moment
    let ht = h * tangent;
    let grad_m_nc = frame.tangential_gradient(&m_conormal_jet);
    let dmnc_dt = Vector3::new(grad_m_nc[0].val(), grad_m_nc[1].val(), grad_m_nc[2].val())
        .dot(&tangent);

    Ok(BoundaryForces {
        tangent,
        conormal,
        p_t,
        p_conormal,
        p_normal,
        m_t,
        m_conormal,
        omega_t,
        omega_conormal,
        eff_p_t: p_t + ht.dot(&tangent) * m_conormal,
        eff_p_conormal: p_conormal + ht.dot(&conormal) * m_conormal,
        eff_p_normal: p_normal + dmnc_dt,
    })
}
