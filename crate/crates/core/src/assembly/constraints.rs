//! Lagrange-multiplier boundary constraints.
//!
//! The multiplier space on a constrained edge is the trace of the
//! displacement basis. Each support type contributes row blocks per
//! constrained quantity: displacement components, the co-normal
//! component, or the rotation along the edge.

use nalgebra::Vector3;

use super::ShellModel;
use crate::error::{Error, Result};
use crate::geometry::GeometryMap;
use crate::nurbs::{KnotKind, SplineSpace};
use crate::quadrature::gauss_rule_1d_on;
use crate::tdc::{FrameJets, SurfaceFrame};

/// Patch edges in the parametric domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Edge {
    RMin,
    RMax,
    SMin,
    SMax,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::RMin, Edge::RMax, Edge::SMin, Edge::SMax];

    /// Parametric axis running along the edge.
    pub fn along_axis(&self) -> usize {
        match self {
            Edge::RMin | Edge::RMax => 1,
            Edge::SMin | Edge::SMax => 0,
        }
    }

    /// Sign of the cross axis pointing out of the domain.
    pub fn outward_sign(&self) -> f64 {
        match self {
            Edge::RMin | Edge::SMin => -1.0,
            Edge::RMax | Edge::SMax => 1.0,
        }
    }
}

/// Supported boundary condition types.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcKind {
    Free,
    /// u_t = u_conormal = u_n = 0.
    SimplySupported,
    /// Simply supported plus zero rotation along the edge.
    Clamped,
    /// Zero co-normal displacement and zero edge rotation.
    Symmetry,
    /// Rigid diaphragm: global x and z displacement blocked, the axial
    /// direction left free (the cylinder benchmarks' convention).
    Diaphragm,
}

impl BcKind {
    pub fn parse(s: &str) -> Option<BcKind> {
        match s {
            "free" => Some(BcKind::Free),
            "simply_supported" | "simply-supported" | "ss" => Some(BcKind::SimplySupported),
            "clamped" => Some(BcKind::Clamped),
            "symmetry" => Some(BcKind::Symmetry),
            "diaphragm" => Some(BcKind::Diaphragm),
            _ => None,
        }
    }
}

/// Element ids touching an edge, ordered along the edge.
pub fn edge_elements(space: &SplineSpace, edge: Edge) -> Vec<usize> {
    let neu = space.knot_u().n_spans();
    let nev = space.knot_v().n_spans();
    space
        .elements()
        .iter()
        .filter(|e| match edge {
            Edge::RMin => e.iu == 0,
            Edge::RMax => e.iu == neu - 1,
            Edge::SMin => e.iv == 0,
            Edge::SMax => e.iv == nev - 1,
        })
        .map(|e| e.id)
        .collect()
}

/// The fixed parameter value of the edge.
fn edge_coordinate(space: &SplineSpace, edge: Edge) -> f64 {
    let (u0, u1) = space.knot_u().domain();
    let (v0, v1) = space.knot_v().domain();
    match edge {
        Edge::RMin => u0,
        Edge::RMax => u1,
        Edge::SMin => v0,
        Edge::SMax => v1,
    }
}

/// Multiplier trace index of a global basis function on the edge, if the
/// function has a nonzero trace there.
fn trace_index(space: &SplineSpace, edge: Edge, global: usize) -> Option<usize> {
    let nu = space.num_basis_u();
    let (gu, gv) = (global % nu, global / nu);
    match edge {
        Edge::RMin => (gu == 0).then_some(gv),
        Edge::RMax => (gu == nu - 1).then_some(gv),
        Edge::SMin => (gv == 0).then_some(gu),
        Edge::SMax => (gv == space.num_basis_v() - 1).then_some(gu),
    }
}

fn edge_multiplier_count(space: &SplineSpace, edge: Edge) -> usize {
    match edge {
        Edge::RMin | Edge::RMax => space.num_basis_v(),
        Edge::SMin | Edge::SMax => space.num_basis_u(),
    }
}

/// One row-block of constraints: which quantity an edge pins.
#[derive(Clone, Copy, Debug)]
enum RowKind {
    Component(usize),
    Conormal,
    Rotation,
}

fn rows_for(kind: BcKind) -> Vec<RowKind> {
    match kind {
        BcKind::Free => vec![],
        BcKind::SimplySupported => vec![
            RowKind::Component(0),
            RowKind::Component(1),
            RowKind::Component(2),
        ],
        BcKind::Clamped => vec![
            RowKind::Component(0),
            RowKind::Component(1),
            RowKind::Component(2),
            RowKind::Rotation,
        ],
        BcKind::Symmetry => vec![RowKind::Conormal, RowKind::Rotation],
        BcKind::Diaphragm => vec![RowKind::Component(0), RowKind::Component(2)],
    }
}

/// Assemble the constraint matrix C (n_dofs x n_mult) as triplets.
/// Returns the triplets and the multiplier count.
pub fn constraint_triplets(model: &ShellModel) -> Result<(Vec<(usize, usize, f64)>, usize)> {
    let space = &model.space;
    let ncp = space.num_basis();
    let (pu, pv) = space.degrees();
    let mut triplets = Vec::new();
    let mut mult_offset = 0usize;

    for &(edge, kind) in &model.bcs {
        if matches!(kind, BcKind::Free) {
            continue;
        }
        let periodic_u = space.knot_u().kind() == KnotKind::Periodic;
        let periodic_v = space.knot_v().kind() == KnotKind::Periodic;
        let on_periodic = match edge {
            Edge::RMin | Edge::RMax => periodic_u,
            Edge::SMin | Edge::SMax => periodic_v,
        };
        if on_periodic {
            return Err(Error::PeriodicEdge(edge));
        }

        let rows = rows_for(kind);
        let n_edge = edge_multiplier_count(space, edge);
        let along = edge.along_axis();
        let qn = (if along == 0 { pu } else { pv }) + 2;
        let fixed = edge_coordinate(space, edge);

        for elem_id in edge_elements(space, edge) {
            let elem = *space.element(elem_id);
            let (t0, t1) = if along == 0 {
                (elem.r0, elem.r1)
            } else {
                (elem.s0, elem.s1)
            };
            let (qpts, qw) = gauss_rule_1d_on(qn, t0, t1)?;
            for (q, &tq) in qpts.iter().enumerate() {
                let (r, s) = if along == 0 { (tq, fixed) } else { (fixed, tq) };
                let basis = space.eval_basis(elem_id, (r, s), 1)?;
                let fj = FrameJets::build(model.geometry.jets(r, s, 2)?, (r, s))?;
                let frame =
                    SurfaceFrame::from_jets(&fj).with_boundary(along, edge.outward_sign());
                let b = frame.boundary.as_ref().unwrap();
                let ds = frame.jac.column(along).norm() * qw[q];

                // tangential gradients for rotation rows
                let grads: Vec<Vector3<f64>> =
                    crate::tdc::tangential_gradient_scalar(&basis, &frame);

                for (row_i, &row) in rows.iter().enumerate() {
                    let row_offset = mult_offset + row_i * n_edge;
                    for (kl, &gl) in basis.indices.iter().enumerate() {
                        let Some(ti) = trace_index(space, edge, gl) else {
                            continue;
                        };
                        let nl = basis.value(kl);
                        if nl == 0.0 {
                            continue;
                        }
                        let mult = row_offset + ti;
                        for (k, &gk) in basis.indices.iter().enumerate() {
                            match row {
                                RowKind::Component(c) => {
                                    let v = nl * basis.value(k) * ds;
                                    if v != 0.0 {
                                        triplets.push((c * ncp + gk, mult, v));
                                    }
                                }
                                RowKind::Conormal => {
                                    let nk = basis.value(k);
                                    for c in 0..3 {
                                        let v = nl * b.conormal[c] * nk * ds;
                                        if v != 0.0 {
                                            triplets.push((c * ncp + gk, mult, v));
                                        }
                                    }
                                }
                                RowKind::Rotation => {
                                    let slope = grads[k].dot(&b.conormal);
                                    for c in 0..3 {
                                        let v = nl * frame.normal[c] * slope * ds;
                                        if v != 0.0 {
                                            triplets.push((c * ncp + gk, mult, v));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        mult_offset += rows.len() * n_edge;
    }

    // point pins: one multiplier each
    for pin in &model.point_pins {
        let elem = space.element_containing(pin.r, pin.s)?;
        let basis = space.eval_basis(elem, (pin.r, pin.s), 0)?;
        for (k, &gk) in basis.indices.iter().enumerate() {
            let v = basis.value(k);
            if v != 0.0 {
                triplets.push((pin.component * ncp + gk, mult_offset, v));
            }
        }
        mult_offset += 1;
    }

    Ok((triplets, mult_offset))
}
