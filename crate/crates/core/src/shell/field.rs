//! Displacement fields: control-point coefficients and their jet
//! evaluations at surface points.

use nalgebra::Vector3;

use crate::jet::Jet;
use crate::nurbs::{BasisEval, SplineSpace};

/// Displacement coefficients stored at the control points of the patch.
#[derive(Clone, Debug)]
pub struct DisplacementField {
    coeffs: Vec<Vector3<f64>>,
}

impl DisplacementField {
    pub fn new(coeffs: Vec<Vector3<f64>>) -> Self {
        DisplacementField { coeffs }
    }

    pub fn zeros(space: &SplineSpace) -> Self {
        DisplacementField {
            coeffs: vec![Vector3::zeros(); space.num_basis()],
        }
    }

    pub fn coeffs(&self) -> &[Vector3<f64>] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Jets of the interpolated field components at a basis evaluation.
    pub fn jets(&self, basis: &BasisEval) -> FieldJets {
        let ord = basis.jets.first().map_or(0, |j| j.order());
        let mut u = [Jet::zero(ord), Jet::zero(ord), Jet::zero(ord)];
        for (k, &gi) in basis.indices.iter().enumerate() {
            let c = &self.coeffs[gi];
            u[0].axpy(c.x, &basis.jets[k]);
            u[1].axpy(c.y, &basis.jets[k]);
            u[2].axpy(c.z, &basis.jets[k]);
        }
        FieldJets { u }
    }
}

/// The three displacement components as jets at one surface point.
#[derive(Clone, Debug)]
pub struct FieldJets {
    pub u: [Jet; 3],
}

impl FieldJets {
    pub fn new(u: [Jet; 3]) -> Self {
        FieldJets { u }
    }

    pub fn order(&self) -> usize {
        self.u[0].order()
    }

    pub fn value(&self) -> Vector3<f64> {
        Vector3::new(self.u[0].val(), self.u[1].val(), self.u[2].val())
    }
}
