//! Gauss-Legendre quadrature on knot-span rectangles.

use crate::error::{Error, Result};

/// Tensor-product quadrature rule on a parametric rectangle.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    /// Points (r, s) inside the rectangle.
    pub points: Vec<(f64, f64)>,
    /// Positive weights; they sum to the rectangle area.
    pub weights: Vec<f64>,
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
///
/// Computed by Newton iteration on P_n with the Chebyshev-based initial
/// guess; accurate to machine precision for n <= 16.
pub fn gauss_legendre_1d(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n < 1 || n > 16 {
        return Err(Error::QuadratureOrder(n));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // initial guess for the i-th root (descending order)
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Ok((nodes, weights))
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = pk;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// n x n tensor Gauss rule mapped to the rectangle [r0, r1] x [s0, s1].
pub fn gauss_rule_on(n: usize, r0: f64, r1: f64, s0: f64, s1: f64) -> Result<QuadratureRule> {
    let (nodes, w) = gauss_legendre_1d(n)?;
    let (jr, js) = (0.5 * (r1 - r0), 0.5 * (s1 - s0));
    let (cr, cs) = (0.5 * (r1 + r0), 0.5 * (s1 + s0));
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for (i, &xi) in nodes.iter().enumerate() {
        for (j, &xj) in nodes.iter().enumerate() {
            points.push((cr + jr * xi, cs + js * xj));
            weights.push(w[i] * w[j] * jr * js);
        }
    }
    Ok(QuadratureRule { points, weights })
}

/// n-point Gauss rule mapped to the interval [a, b].
pub fn gauss_rule_1d_on(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (nodes, w) = gauss_legendre_1d(n)?;
    let jac = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    Ok((
        nodes.iter().map(|&x| mid + jac * x).collect(),
        w.iter().map(|&wi| wi * jac).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_rule_is_midpoint() {
        let rule = gauss_rule_on(1, -1.0, 1.0, -1.0, 1.0).unwrap();
        assert_eq!(rule.points.len(), 1);
        assert!((rule.points[0].0).abs() < 1e-15);
        assert!((rule.points[0].1).abs() < 1e-15);
        assert!((rule.weights[0] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn two_point_nodes_match_analytic() {
        let (nodes, weights) = gauss_legendre_1d(2).unwrap();
        let a = 1.0 / 3.0f64.sqrt();
        assert!((nodes[0] + a).abs() < 1e-15);
        assert!((nodes[1] - a).abs() < 1e-15);
        assert!((weights[0] - 1.0).abs() < 1e-15);
        assert!((weights[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn integrates_r2s2_exactly() {
        let rule = gauss_rule_on(2, -1.0, 1.0, -1.0, 1.0).unwrap();
        let val: f64 = rule
            .points
            .iter()
            .zip(&rule.weights)
            .map(|(&(r, s), &w)| w * r * r * s * s)
            .sum();
        assert!((val - 4.0 / 9.0).abs() < 1e-14);
    }

    /// Order-n rules integrate degree 2n-1 polynomials exactly.
    #[test]
    fn exactness_through_degree_2n_minus_1() {
        for n in 1..=16usize {
            let (nodes, weights) = gauss_legendre_1d(n).unwrap();
            for deg in 0..=(2 * n - 1) {
                let num: f64 = nodes
                    .iter()
                    .zip(&weights)
                    .map(|(&x, &w)| w * x.powi(deg as i32))
                    .sum();
                let exact = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg as f64 + 1.0)
                };
                assert!(
                    (num - exact).abs() < 1e-13,
                    "n = {n}, degree {deg}: {num} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(gauss_legendre_1d(0).is_err());
        assert!(gauss_legendre_1d(17).is_err());
    }

    #[test]
    fn weights_sum_to_area_on_span() {
        let rule = gauss_rule_on(3, 0.25, 0.5, 0.5, 1.0).unwrap();
        let total: f64 = rule.weights.iter().sum();
        assert!((total - 0.25 * 0.5).abs() < 1e-14);
    }
}
