//! Kirchhoff-Love thin-shell finite elements on NURBS surfaces, with all
//! surface differential operators expressed in global coordinates through
//! the normal projector (no curvilinear coordinates or Christoffel
//! symbols in the main assembly path).

pub mod assembly;
pub mod benchmarks;
#[doc(hidden)]
pub mod classical;
pub mod error;
pub mod geometry;
pub mod jet;
pub mod nurbs;
pub mod quadrature;
pub mod shell;
pub mod tdc;
pub mod verify;

pub use error::{Error, Result};
