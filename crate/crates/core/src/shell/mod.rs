//! Kirchhoff-Love shell mechanics in tangential form: material law,
//! kinematics, stress resultants, the strong-form equilibrium operator,
//! and boundary force decomposition.

pub mod boundary;
pub mod field;
pub mod kinematics;
pub mod material;
pub mod resultants;
pub mod strong_form;

pub use boundary::{boundary_forces, BoundaryForces, EdgeContext};
pub use field::{DisplacementField, FieldJets};
pub use kinematics::{difference_vector, strains, Strains};
pub use material::Material;
pub use resultants::{in_plane_eigenvalues, stress_resultants, StressResultants};
pub use strong_form::strong_form;
