//! B-spline basis values and derivatives on a single knot span.

/// Values and derivatives of the `p + 1` basis functions with support on
/// the span `[knots[span], knots[span + 1])`, evaluated at `u`.
///
/// `out[k][j]` is the k-th derivative of basis function `span - p + j`.
/// Derivatives of order above the degree are zero and are filled as such,
/// so `out` always has `n_derivs + 1` rows.
pub fn ders_basis_funs(knots: &[f64], span: usize, u: f64, p: usize, n_derivs: usize) -> Vec<Vec<f64>> {
    let du = n_derivs.min(p);
    let mut ndu = vec![vec![0.0; p + 1]; p + 1];
    let mut left = vec![0.0; p + 1];
    let mut right = vec![0.0; p + 1];
    ndu[0][0] = 1.0;
    for j in 1..=p {
        left[j] = u - knots[span + 1 - j];
        right[j] = knots[span + j] - u;
        let mut saved = 0.0;
        for r in 0..j {
            ndu[j][r] = right[r + 1] + left[j - r];
            let temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }

    let mut ders = vec![vec![0.0; p + 1]; n_derivs + 1];
    for j in 0..=p {
        ders[0][j] = ndu[j][p];
    }

    let mut a = vec![vec![0.0; p + 1]; 2];
    for r in 0..=p {
        let (mut s1, mut s2) = (0usize, 1usize);
        a[0][0] = 1.0;
        for k in 1..=du {
            let mut d = 0.0;
            let rk = r as isize - k as isize;
            let pk = p - k;
            if r >= k {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                d = a[s2][0] * ndu[rk as usize][pk];
            }
            let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
            let j2 = if r as isize - 1 <= pk as isize { k - 1 } else { p - r };
            for j in j1..=j2 {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][(rk + j as isize) as usize];
                d += a[s2][j] * ndu[(rk + j as isize) as usize][pk];
            }
            if r <= pk {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = d;
            std::mem::swap(&mut s1, &mut s2);
        }
    }

    let mut factor = p as f64;
    for k in 1..=du {
        for j in 0..=p {
            ders[k][j] *= factor;
        }
        factor *= (p - k) as f64;
    }
    ders
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Quadratic Bezier span: values at r = 0.5 are the Bernstein values.
    #[test]
    fn bezier_quadratic_midpoint() {
        let knots = [0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let d = ders_basis_funs(&knots, 2, 0.5, 2, 2);
        assert!((d[0][0] - 0.25).abs() < 1e-15);
        assert!((d[0][1] - 0.5).abs() < 1e-15);
        assert!((d[0][2] - 0.25).abs() < 1e-15);
        // derivatives of Bernstein: B0' = -2(1-u), B1' = 2 - 4u, B2' = 2u
        assert!((d[1][0] + 1.0).abs() < 1e-15);
        assert!((d[1][1] - 0.0).abs() < 1e-15);
        assert!((d[1][2] - 1.0).abs() < 1e-15);
        // second derivatives: 2, -4, 2
        assert!((d[2][0] - 2.0).abs() < 1e-14);
        assert!((d[2][1] + 4.0).abs() < 1e-14);
        assert!((d[2][2] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn partition_of_unity_and_zero_derivative_sums() {
        let knots = [0.0, 0.0, 0.0, 0.0, 0.2, 0.45, 0.45, 0.7, 1.0, 1.0, 1.0, 1.0];
        let p = 3;
        for &(span, u) in &[(3usize, 0.1), (4, 0.3), (6, 0.5), (7, 0.9)] {
            let d = ders_basis_funs(&knots, span, u, p, 3);
            let sum: f64 = d[0].iter().sum();
            assert!((sum - 1.0).abs() < 1e-13, "u = {u}");
            for k in 1..=3 {
                let dsum: f64 = d[k].iter().sum();
                assert!(dsum.abs() < 1e-10, "order {k} at u = {u}: {dsum}");
            }
        }
    }

    /// First derivatives agree with central finite differences of values.
    #[test]
    fn derivatives_match_finite_differences() {
        let knots = [0.0, 0.0, 0.0, 0.0, 0.0, 0.3, 0.6, 1.0, 1.0, 1.0, 1.0, 1.0];
        let p = 4;
        let span = 5;
        let h = 1e-6;
        for &u in &[0.35, 0.4, 0.55] {
            let d0 = ders_basis_funs(&knots, span, u - h, p, 0);
            let d1 = ders_basis_funs(&knots, span, u + h, p, 0);
            let d = ders_basis_funs(&knots, span, u, p, 1);
            for j in 0..=p {
                let fd = (d1[0][j] - d0[0][j]) / (2.0 * h);
                assert!(
                    (fd - d[1][j]).abs() <= 1e-7 * d[1][j].abs().max(1.0),
                    "u = {u}, j = {j}: fd {fd} vs {}",
                    d[1][j]
                );
            }
        }
    }

    #[test]
    fn derivatives_beyond_degree_are_zero() {
        let knots = [0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let d = ders_basis_funs(&knots, 2, 0.3, 2, 4);
        assert_eq!(d.len(), 5);
        for j in 0..=2 {
            assert_eq!(d[3][j], 0.0);
            assert_eq!(d[4][j], 0.0);
        }
    }
}
