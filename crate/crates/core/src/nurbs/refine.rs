//! Exact refinement of NURBS data: knot insertion and Bezier degree
//! elevation, both on homogeneous control points so the mapped geometry
//! is preserved bit-for-bit up to rounding.

use crate::error::{Error, Result};

pub type Hom = [f64; 4];

/// Insert `u` once into an open knot vector; returns the new knots and
/// control points. Boehm's algorithm.
pub fn insert_knot(knots: &[f64], p: usize, ctrl: &[Hom], u: f64) -> (Vec<f64>, Vec<Hom>) {
    let n = ctrl.len();
    debug_assert!(u > knots[p] && u < knots[knots.len() - 1 - p] || (u >= knots[0] && u <= *knots.last().unwrap()));
    // span: largest k with knots[k] <= u < knots[k+1]
    let mut k = p;
    while k + 1 < knots.len() - p && knots[k + 1] <= u {
        k += 1;
    }
    let mut new_ctrl = Vec::with_capacity(n + 1);
    for i in 0..=k - p {
        new_ctrl.push(ctrl[i]);
    }
    for i in k - p + 1..=k {
        let denom = knots[i + p] - knots[i];
        let alpha = if denom > 0.0 { (u - knots[i]) / denom } else { 0.0 };
        let mut q = [0.0; 4];
        for c in 0..4 {
            q[c] = alpha * ctrl[i][c] + (1.0 - alpha) * ctrl[i - 1][c];
        }
        new_ctrl.push(q);
    }
    for i in k..n {
        new_ctrl.push(ctrl[i]);
    }
    let mut new_knots = knots.to_vec();
    new_knots.insert(k + 1, u);
    (new_knots, new_ctrl)
}

/// Elevate a single-span Bezier curve (open knots with no interior knots)
/// from degree `p` to `p + 1`.
pub fn elevate_bezier(knots: &[f64], p: usize, ctrl: &[Hom]) -> Result<(Vec<f64>, Vec<Hom>)> {
    if ctrl.len() != p + 1 || knots.len() != 2 * (p + 1) {
        return Err(Error::InvalidPatch(
            "degree elevation expects a single-span Bezier direction".into(),
        ));
    }
    let a = knots[0];
    let b = *knots.last().unwrap();
    let q = p + 1;
    let mut out = Vec::with_capacity(q + 1);
    out.push(ctrl[0]);
    for i in 1..=p {
        let t = i as f64 / q as f64;
        let mut pt = [0.0; 4];
        for c in 0..4 {
            pt[c] = t * ctrl[i - 1][c] + (1.0 - t) * ctrl[i][c];
        }
        out.push(pt);
    }
    out.push(ctrl[p]);
    let mut new_knots = vec![a; q + 1];
    new_knots.extend(std::iter::repeat(b).take(q + 1));
    Ok((new_knots, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval_curve(knots: &[f64], p: usize, ctrl: &[Hom], u: f64) -> [f64; 3] {
        let mut span = p;
        while span + 1 < ctrl.len() && knots[span + 1] <= u {
            span += 1;
        }
        let d = crate::nurbs::basis::ders_basis_funs(knots, span, u, p, 0);
        let mut hom = [0.0; 4];
        for j in 0..=p {
            for c in 0..4 {
                hom[c] += d[0][j] * ctrl[span - p + j][c];
            }
        }
        [hom[0] / hom[3], hom[1] / hom[3], hom[2] / hom[3]]
    }

    /// Quarter circle as a rational quadratic; refinement ops must keep
    /// every sampled point on the circle.
    #[test]
    fn refinement_preserves_circle() {
        let w = std::f64::consts::FRAC_1_SQRT_2;
        let knots = vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let ctrl: Vec<Hom> = vec![
            [1.0, 0.0, 0.0, 1.0],
            [w, w, 0.0, w],
            [0.0, 1.0, 0.0, 1.0],
        ];
        let (k1, c1) = elevate_bezier(&knots, 2, &ctrl).unwrap();
        let (k2, c2) = insert_knot(&k1, 3, &c1, 0.5);
        let (k3, c3) = insert_knot(&k2, 3, &c2, 0.25);
        for i in 0..=20 {
            let u = i as f64 / 20.0;
            let pt = eval_curve(&k3, 3, &c3, u);
            let r = (pt[0] * pt[0] + pt[1] * pt[1]).sqrt();
            assert!((r - 1.0).abs() < 1e-12, "u = {u}: radius {r}");
        }
    }

    #[test]
    fn insertion_preserves_point_count() {
        let knots = vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let ctrl: Vec<Hom> = vec![
            [0.0, 0.0, 0.0, 1.0],
            [0.5, 1.0, 0.0, 1.0],
            [1.0, 0.0, 0.0, 1.0],
        ];
        let (k, c) = insert_knot(&knots, 2, &ctrl, 0.5);
        assert_eq!(k.len(), 7);
        assert_eq!(c.len(), 4);
    }
}
