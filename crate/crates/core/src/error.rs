//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid knot vector: {0}")]
    InvalidKnots(String),

    #[error("invalid patch: {0}")]
    InvalidPatch(String),

    #[error("parametric point ({r}, {s}) lies outside element {elem}")]
    PointOutsideElement { elem: usize, r: f64, s: f64 },

    #[error("derivative order {requested} unsupported (maximum {max})")]
    UnsupportedDerivativeOrder { requested: usize, max: usize },

    #[error("quadrature order {0} out of range 1..=16")]
    QuadratureOrder(usize),

    #[error("degenerate surface mapping: |J_r x J_s| = {cross_norm:.3e} below tolerance at (r, s) = ({r}, {s})")]
    DegenerateJacobian { r: f64, s: f64, cross_norm: f64 },

    #[error("degenerate metric: det G = {0:.3e}")]
    DegenerateMetric(f64),

    #[error("projector requires a unit normal, got |n| = {0}")]
    NonUnitNormal(f64),

    #[error("operation requires derivatives up to order {required}, only {available} available")]
    InsufficientDerivatives { required: usize, available: usize },

    #[error("boundary data requested at a non-boundary point")]
    NotOnBoundary,

    #[error("edge {0:?} is interior (periodic direction) and cannot carry a boundary condition")]
    PeriodicEdge(crate::assembly::Edge),

    #[error("singular system: detected nullspace dimension {nullspace_dim}; constraints are insufficient")]
    SingularSystem { nullspace_dim: usize },

    #[error("linear solver failed: {0}")]
    SolverFailure(String),

    #[error("residual error requires basis degree >= 4, got {0}")]
    ResidualDegreeTooLow(usize),

    #[error("patch file parse error at line {line}: {msg}")]
    PatchParse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
