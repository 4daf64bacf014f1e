//! NURBS patches: knot vectors, basis evaluation with parametric
//! derivatives through order four, exact refinement, and patch file I/O.

pub mod basis;
pub mod io;
pub mod knots;
pub mod patch;
pub mod refine;

pub use knots::{KnotKind, KnotVector};
pub use patch::{BasisEval, Element, NurbsPatch, SplineSpace, MAX_DERIV_ORDER};
