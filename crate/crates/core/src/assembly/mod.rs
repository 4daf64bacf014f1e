//! Global assembly: element stiffness and load, Lagrange-multiplier
//! boundary constraints, and the symmetric indefinite saddle solve.

pub mod constraints;
pub mod element;
pub mod system;

pub use constraints::{constraint_triplets, edge_elements, BcKind, Edge};
pub use element::{element_load, element_stiffness, BendingForm, ElementMatrices};
pub use system::{assemble, assemble_and_solve, solve_system, AssembledSystem, Solution, SolveOptions};

use nalgebra::Vector3;

use crate::geometry::Geometry;
use crate::nurbs::SplineSpace;
use crate::shell::Material;

/// Distributed load per unit surface area, as a function of the
/// parametric point.
pub enum Load {
    None,
    Field(Box<dyn Fn(f64, f64) -> Vector3<f64> + Sync + Send>),
}

impl Load {
    pub fn eval(&self, r: f64, s: f64) -> Vector3<f64> {
        match self {
            Load::None => Vector3::zeros(),
            Load::Field(f) => f(r, s),
        }
    }

    pub fn constant(f: Vector3<f64>) -> Self {
        Load::Field(Box::new(move |_, _| f))
    }
}

/// Concentrated load at a parametric point, applied consistently through
/// the basis values.
#[derive(Clone, Copy, Debug)]
pub struct PointLoad {
    pub r: f64,
    pub s: f64,
    pub force: Vector3<f64>,
}

/// Single-point displacement constraint (one global component pinned at a
/// parametric point); used to remove load-orthogonal rigid modes such as
/// the axial translation of a diaphragm-supported cylinder.
#[derive(Clone, Copy, Debug)]
pub struct PointPin {
    pub r: f64,
    pub s: f64,
    pub component: usize,
}

/// A complete discretized shell problem.
pub struct ShellModel {
    pub geometry: Geometry,
    pub space: SplineSpace,
    pub material: Material,
    pub bcs: Vec<(Edge, BcKind)>,
    pub point_pins: Vec<PointPin>,
    pub load: Load,
    pub point_loads: Vec<PointLoad>,
}

impl ShellModel {
    /// Default quadrature: (p + 1)^2 Gauss points per knot span.
    pub fn default_quad_points(&self) -> usize {
        let (pu, pv) = self.space.degrees();
        pu.max(pv) + 1
    }

    pub fn n_dofs(&self) -> usize {
        3 * self.space.num_basis()
    }
}
