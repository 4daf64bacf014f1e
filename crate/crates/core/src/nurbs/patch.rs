//! Tensor-product spline spaces and NURBS patches.

use nalgebra::Vector3;

use super::basis::ders_basis_funs;
use super::knots::KnotVector;
use super::refine;
use crate::error::{Error, Result};
use crate::jet::Jet;

pub const MAX_DERIV_ORDER: usize = 4;

/// A knot-span element of the tensor-product mesh.
#[derive(Clone, Copy, Debug)]
pub struct Element {
    pub id: usize,
    pub iu: usize,
    pub iv: usize,
    /// Indices into the knot arrays.
    pub span_u: usize,
    pub span_v: usize,
    pub r0: f64,
    pub r1: f64,
    pub s0: f64,
    pub s1: f64,
}

impl Element {
    pub fn area(&self) -> f64 {
        (self.r1 - self.r0) * (self.s1 - self.s0)
    }

    pub fn contains(&self, r: f64, s: f64) -> bool {
        let tol_r = 1e-12 * (self.r1 - self.r0).abs().max(1.0);
        let tol_s = 1e-12 * (self.s1 - self.s0).abs().max(1.0);
        r >= self.r0 - tol_r && r <= self.r1 + tol_r && s >= self.s0 - tol_s && s <= self.s1 + tol_s
    }
}

/// Basis values and parametric derivatives at one point of one element.
///
/// `jets[k]` is the truncated Taylor expansion of shape function
/// `indices[k]` about the evaluation point; all mixed parametric
/// derivatives through `d_max` are exact.
#[derive(Clone, Debug)]
pub struct BasisEval {
    pub element: usize,
    pub point: (f64, f64),
    pub d_max: usize,
    /// Global basis-function indices with support on the element.
    pub indices: Vec<usize>,
    pub jets: Vec<Jet>,
}

impl BasisEval {
    pub fn n_shapes(&self) -> usize {
        self.indices.len()
    }

    pub fn value(&self, k: usize) -> f64 {
        self.jets[k].val()
    }

    /// Parametric derivative d^{a+b} N_k / dr^a ds^b.
    pub fn deriv(&self, k: usize, a: usize, b: usize) -> f64 {
        self.jets[k].deriv(a, b)
    }
}

/// The trial/test space: tensor-product B-splines, optionally rational.
#[derive(Clone, Debug)]
pub struct SplineSpace {
    knot_u: KnotVector,
    knot_v: KnotVector,
    /// Per-function weights (u-fastest); `None` means unit weights.
    weights: Option<Vec<f64>>,
    elements: Vec<Element>,
}

impl SplineSpace {
    pub fn new(knot_u: KnotVector, knot_v: KnotVector, weights: Option<Vec<f64>>) -> Result<Self> {
        let n = knot_u.num_basis() * knot_v.num_basis();
        if let Some(w) = &weights {
            if w.len() != n {
                return Err(Error::InvalidPatch(format!(
                    "{} weights for {} basis functions",
                    w.len(),
                    n
                )));
            }
            if w.iter().any(|&wi| !(wi > 0.0)) {
                return Err(Error::InvalidPatch("weights must be positive".into()));
            }
        }
        let spans_u = knot_u.span_indices();
        let spans_v = knot_v.span_indices();
        let mut elements = Vec::with_capacity(spans_u.len() * spans_v.len());
        for (iv, &sv) in spans_v.iter().enumerate() {
            for (iu, &su) in spans_u.iter().enumerate() {
                let (r0, r1) = knot_u.span_range(su);
                let (s0, s1) = knot_v.span_range(sv);
                elements.push(Element {
                    id: elements.len(),
                    iu,
                    iv,
                    span_u: su,
                    span_v: sv,
                    r0,
                    r1,
                    s0,
                    s1,
                });
            }
        }
        Ok(SplineSpace {
            knot_u,
            knot_v,
            weights,
            elements,
        })
    }

    pub fn knot_u(&self) -> &KnotVector {
        &self.knot_u
    }

    pub fn knot_v(&self) -> &KnotVector {
        &self.knot_v
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.knot_u.degree(), self.knot_v.degree())
    }

    pub fn num_basis_u(&self) -> usize {
        self.knot_u.num_basis()
    }

    pub fn num_basis_v(&self) -> usize {
        self.knot_v.num_basis()
    }

    pub fn num_basis(&self) -> usize {
        self.num_basis_u() * self.num_basis_v()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, id: usize) -> &Element {
        &self.elements[id]
    }

    /// Global indices of the (pu+1)(pv+1) functions supported on `elem`,
    /// u-fastest.
    pub fn supported_indices(&self, elem: &Element) -> Vec<usize> {
        let (pu, pv) = self.degrees();
        let nu = self.num_basis_u();
        let mut out = Vec::with_capacity((pu + 1) * (pv + 1));
        for b in 0..=pv {
            let gv = self.knot_v.global_index(elem.span_v - pv + b);
            for a in 0..=pu {
                let gu = self.knot_u.global_index(elem.span_u - pu + a);
                out.push(gu + gv * nu);
            }
        }
        out
    }

    /// Evaluate all supported shape functions with parametric derivatives
    /// through `d_max` (rational differentiation applied through the
    /// weights for NURBS spaces).
    pub fn eval_basis(&self, elem_id: usize, point: (f64, f64), d_max: usize) -> Result<BasisEval> {
        if d_max > MAX_DERIV_ORDER {
            return Err(Error::UnsupportedDerivativeOrder {
                requested: d_max,
                max: MAX_DERIV_ORDER,
            });
        }
        let elem = &self.elements[elem_id];
        let (r, s) = point;
        if !elem.contains(r, s) {
            return Err(Error::PointOutsideElement { elem: elem_id, r, s });
        }
        let (pu, pv) = self.degrees();
        let du = ders_basis_funs(self.knot_u.knots(), elem.span_u, r, pu, d_max);
        let dv = ders_basis_funs(self.knot_v.knots(), elem.span_v, s, pv, d_max);
        let indices = self.supported_indices(elem);

        let mut jets = Vec::with_capacity(indices.len());
        for b in 0..=pv {
            for a in 0..=pu {
                jets.push(Jet::from_derivs(d_max, |da, db| du[da][a] * dv[db][b]));
            }
        }

        if let Some(w) = &self.weights {
            // rational basis: R_k = w_k B_k / sum_j w_j B_j, via jet division
            let mut denom = Jet::zero(d_max);
            for (k, jet) in jets.iter().enumerate() {
                denom.axpy(w[indices[k]], jet);
            }
            for (k, jet) in jets.iter_mut().enumerate() {
                *jet = jet.scale(w[indices[k]]).div(&denom);
            }
        }

        Ok(BasisEval {
            element: elem_id,
            point,
            d_max,
            indices,
            jets,
        })
    }
}

/// A NURBS surface patch: the geometry and, isoparametrically, the
/// displacement trial space.
#[derive(Clone, Debug)]
pub struct NurbsPatch {
    space: SplineSpace,
    /// Control points, u-fastest.
    points: Vec<Vector3<f64>>,
}

impl NurbsPatch {
    pub fn new(
        knot_u: KnotVector,
        knot_v: KnotVector,
        points: Vec<Vector3<f64>>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let n = knot_u.num_basis() * knot_v.num_basis();
        if points.len() != n {
            return Err(Error::InvalidPatch(format!(
                "control grid has {} points, expected {} x {}",
                points.len(),
                knot_u.num_basis(),
                knot_v.num_basis()
            )));
        }
        let space = SplineSpace::new(knot_u, knot_v, Some(weights))?;
        Ok(NurbsPatch { space, points })
    }

    pub fn space(&self) -> &SplineSpace {
        &self.space
    }

    pub fn points(&self) -> &[Vector3<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        self.space.weights().unwrap()
    }

    pub fn nu(&self) -> usize {
        self.space.num_basis_u()
    }

    pub fn nv(&self) -> usize {
        self.space.num_basis_v()
    }

    fn homogeneous_grid(&self) -> Vec<refine::Hom> {
        let w = self.weights();
        self.points
            .iter()
            .zip(w)
            .map(|(p, &wi)| [wi * p.x, wi * p.y, wi * p.z, wi])
            .collect()
    }

    fn from_homogeneous(
        knot_u: KnotVector,
        knot_v: KnotVector,
        grid: Vec<refine::Hom>,
    ) -> Result<Self> {
        let points = grid
            .iter()
            .map(|h| Vector3::new(h[0] / h[3], h[1] / h[3], h[2] / h[3]))
            .collect();
        let weights = grid.iter().map(|h| h[3]).collect();
        NurbsPatch::new(knot_u, knot_v, points, weights)
    }

    /// Elevate both directions to the target degrees. Each direction must
    /// currently be a single-span Bezier (the benchmark patches are built
    /// that way and refined afterwards).
    pub fn elevated_to(&self, pu_target: usize, pv_target: usize) -> Result<Self> {
        let (pu, pv) = self.space.degrees();
        if pu_target < pu || pv_target < pv {
            return Err(Error::InvalidPatch("cannot lower the degree".into()));
        }
        let mut knots_u = self.space.knot_u().knots().to_vec();
        let mut knots_v = self.space.knot_v().knots().to_vec();
        let mut grid = self.homogeneous_grid();
        let (mut nu, mut nv) = (self.nu(), self.nv());

        for p in pu..pu_target {
            // u-rows are contiguous in the u-fastest layout, so the
            // concatenated refined rows are already in layout order
            let mut new_grid = Vec::new();
            let mut new_knots = Vec::new();
            for j in 0..nv {
                let row: Vec<refine::Hom> = (0..nu).map(|i| grid[i + j * nu]).collect();
                let (k, c) = refine::elevate_bezier(&knots_u, p, &row)?;
                new_knots = k;
                new_grid.extend(c);
            }
            knots_u = new_knots;
            nu += 1;
            grid = new_grid;
        }
        for p in pv..pv_target {
            let mut new_grid = Vec::new();
            let mut new_knots = Vec::new();
            for i in 0..nu {
                let col: Vec<refine::Hom> = (0..nv).map(|j| grid[i + j * nu]).collect();
                let (k, c) = refine::elevate_bezier(&knots_v, p, &col)?;
                new_knots = k;
                new_grid.extend(c);
            }
            knots_v = new_knots;
            nv += 1;
            grid = transpose_to_u_fastest(&new_grid, nu, nv);
        }
        Self::from_homogeneous(
            KnotVector::open(knots_u, pu_target)?,
            KnotVector::open(knots_v, pv_target)?,
            grid,
        )
    }

    /// Uniform refinement to `n_u x n_v` knot spans by knot insertion.
    pub fn refined_uniform(&self, n_u: usize, n_v: usize) -> Result<Self> {
        let (pu, pv) = self.space.degrees();
        let mut knots_u = self.space.knot_u().knots().to_vec();
        let mut knots_v = self.space.knot_v().knots().to_vec();
        let mut grid = self.homogeneous_grid();
        let (mut nu, mut nv) = (self.nu(), self.nv());
        let (u0, u1) = self.space.knot_u().domain();
        let (v0, v1) = self.space.knot_v().domain();

        for t in new_interior_knots(&knots_u, u0, u1, n_u) {
            let mut new_grid = Vec::new();
            let mut new_knots = Vec::new();
            for j in 0..nv {
                let row: Vec<refine::Hom> = (0..nu).map(|i| grid[i + j * nu]).collect();
                let (k, c) = refine::insert_knot(&knots_u, pu, &row, t);
                new_knots = k;
                new_grid.extend(c);
            }
            knots_u = new_knots;
            nu += 1;
            grid = new_grid;
        }
        for t in new_interior_knots(&knots_v, v0, v1, n_v) {
            let mut new_grid = Vec::new();
            let mut new_knots = Vec::new();
            for i in 0..nu {
                let col: Vec<refine::Hom> = (0..nv).map(|j| grid[i + j * nu]).collect();
                let (k, c) = refine::insert_knot(&knots_v, pv, &col, t);
                new_knots = k;
                new_grid.extend(c);
            }
            knots_v = new_knots;
            nv += 1;
            grid = transpose_to_u_fastest(&new_grid, nu, nv);
        }
        Self::from_homogeneous(
            KnotVector::open(knots_u, pu)?,
            KnotVector::open(knots_v, pv)?,
            grid,
        )
    }

    /// Jets of the geometry map at (r, s), derivatives through `order`.
    pub fn geometry_jets(&self, r: f64, s: f64, order: usize) -> Result<[Jet; 3]> {
        if order > MAX_DERIV_ORDER {
            return Err(Error::UnsupportedDerivativeOrder {
                requested: order,
                max: MAX_DERIV_ORDER,
            });
        }
        let elem_id = self.space.element_containing(r, s)?;
        let elem = self.space.element(elem_id);
        let (pu, pv) = self.space.degrees();
        let du = ders_basis_funs(self.space.knot_u().knots(), elem.span_u, r, pu, order);
        let dv = ders_basis_funs(self.space.knot_v().knots(), elem.span_v, s, pv, order);
        let indices = self.space.supported_indices(elem);
        let w = self.weights();

        let mut num = [Jet::zero(order), Jet::zero(order), Jet::zero(order)];
        let mut den = Jet::zero(order);
        let mut k = 0;
        for b in 0..=pv {
            for a in 0..=pu {
                let jet = Jet::from_derivs(order, |da, db| du[da][a] * dv[db][b]);
                let gi = indices[k];
                let wi = w[gi];
                let pt = &self.points[gi];
                num[0].axpy(wi * pt.x, &jet);
                num[1].axpy(wi * pt.y, &jet);
                num[2].axpy(wi * pt.z, &jet);
                den.axpy(wi, &jet);
                k += 1;
            }
        }
        Ok([num[0].div(&den), num[1].div(&den), num[2].div(&den)])
    }
}

impl SplineSpace {
    /// Element whose closure contains (r, s); ties resolve to the lower span.
    pub fn element_containing(&self, r: f64, s: f64) -> Result<usize> {
        let spans_u = self.knot_u.span_indices();
        let spans_v = self.knot_v.span_indices();
        let iu = locate(&spans_u, self.knot_u.knots(), r)
            .ok_or(Error::PointOutsideElement { elem: usize::MAX, r, s })?;
        let iv = locate(&spans_v, self.knot_v.knots(), s)
            .ok_or(Error::PointOutsideElement { elem: usize::MAX, r, s })?;
        Ok(iu + iv * spans_u.len())
    }
}

fn locate(spans: &[usize], knots: &[f64], t: f64) -> Option<usize> {
    for (i, &sp) in spans.iter().enumerate() {
        if t >= knots[sp] && t <= knots[sp + 1] {
            return Some(i);
        }
    }
    None
}

fn new_interior_knots(current: &[f64], lo: f64, hi: f64, n_spans: usize) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 1..n_spans {
        let t = lo + (hi - lo) * i as f64 / n_spans as f64;
        if !current.iter().any(|&k| (k - t).abs() < 1e-14) {
            out.push(t);
        }
    }
    out
}

/// Columns of length `col_len` stacked contiguously -> u-fastest grid.
fn transpose_to_u_fastest(cols: &[refine::Hom], n_cols: usize, col_len: usize) -> Vec<refine::Hom> {
    let mut out = vec![[0.0; 4]; n_cols * col_len];
    for i in 0..n_cols {
        for j in 0..col_len {
            out[i + j * n_cols] = cols[i * col_len + j];
        }
    }
    out
}
