//! Per-point surface geometry: Jacobian, metric, normal, projector,
//! Weingarten map, curvatures, and the boundary tangent/co-normal pair.
//!
//! All frame fields are carried as jets so that tangential derivatives of
//! the frame itself (needed by the strong form and the residual) are
//! exact, not finite-differenced.

use nalgebra::{Matrix2, Matrix3, Matrix3x2, Vector3};

use crate::error::{Error, Result};
use crate::jet::Jet;

/// Relative tolerance below which the Jacobian cross product is treated
/// as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Jet-valued frame fields at one surface point.
pub struct FrameJets {
    /// Jets of the map (order k).
    pub x: [Jet; 3],
    /// Columns of the Jacobi matrix (order k-1).
    pub j_r: [Jet; 3],
    pub j_s: [Jet; 3],
    /// Unit normal from the normalized column cross product (order k-1).
    pub n: [Jet; 3],
    /// Q = J G^{-1}; maps reference gradients to tangential ones (order k-1).
    pub q: [[Jet; 2]; 3],
    /// Normal projector P = I - n (x) n (order k-1).
    pub p: [[Jet; 3]; 3],
    /// Weingarten map H = grad_dir n (order k-2, absent for k < 2).
    pub h: Option<[[Jet; 3]; 3]>,
    /// Surface measure density |j_r x j_s| = sqrt(det G) (order k-1).
    pub area_density: Jet,
}

impl FrameJets {
    pub fn build(x: [Jet; 3], point: (f64, f64)) -> Result<Self> {
        let order = x[0].order();
        debug_assert!(order >= 1);
        let j_r = [x[0].differentiate(0), x[1].differentiate(0), x[2].differentiate(0)];
        let j_s = [x[0].differentiate(1), x[1].differentiate(1), x[2].differentiate(1)];

        let cross = jet_cross(&j_r, &j_s);
        let cross_norm2 = jet_dot(&cross, &cross);
        let nr = vec_norm_val(&j_r);
        let ns = vec_norm_val(&j_s);
        let cn = cross_norm2.val().sqrt();
        if !(cn > DEGENERACY_TOL * nr * ns) {
            return Err(Error::DegenerateJacobian {
                r: point.0,
                s: point.1,
                cross_norm: cn,
            });
        }
        let area_density = cross_norm2.sqrt();
        let n = [
            cross[0].div(&area_density),
            cross[1].div(&area_density),
            cross[2].div(&area_density),
        ];

        // metric and its inverse
        let g11 = jet_dot(&j_r, &j_r);
        let g12 = jet_dot(&j_r, &j_s);
        let g22 = jet_dot(&j_s, &j_s);
        let det_g = g11.mul(&g22).sub(&g12.mul(&g12));
        if !(det_g.val() > 0.0) {
            return Err(Error::DegenerateMetric(det_g.val()));
        }
        let gi11 = g22.div(&det_g);
        let gi12 = g12.div(&det_g).neg();
        let gi22 = g11.div(&det_g);

        let mut q = [[Jet::zero(order - 1); 2]; 3];
        for i in 0..3 {
            q[i][0] = j_r[i].mul(&gi11).add(&j_s[i].mul(&gi12));
            q[i][1] = j_r[i].mul(&gi12).add(&j_s[i].mul(&gi22));
        }

        let mut p = [[Jet::zero(order - 1); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let nn = n[i].mul(&n[j]).neg();
                p[i][j] = if i == j { nn.add_scalar(1.0) } else { nn };
            }
        }

        let h = if order >= 2 {
            let hord = order - 2;
            let n_r = [n[0].differentiate(0), n[1].differentiate(0), n[2].differentiate(0)];
            let n_s = [n[0].differentiate(1), n[1].differentiate(1), n[2].differentiate(1)];
            let mut h = [[Jet::zero(hord); 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    // H_ij = dGamma_j n_i = Q_{j a} dn_i/dr_a
                    h[i][j] = n_r[i]
                        .mul(&q[j][0].truncated(hord))
                        .add(&n_s[i].mul(&q[j][1].truncated(hord)));
                }
            }
            Some(h)
        } else {
            None
        };

        Ok(FrameJets {
            x,
            j_r,
            j_s,
            n,
            q,
            p,
            h,
            area_density,
        })
    }

    pub fn order(&self) -> usize {
        self.x[0].order()
    }

    /// Tangential gradient of a scalar field given as a jet:
    /// grad_Gamma phi = Q grad_r phi. Output jets are one order lower.
    pub fn tangential_gradient(&self, phi: &Jet) -> [Jet; 3] {
        let ord = phi.order() - 1;
        let pr = phi.differentiate(0);
        let ps = phi.differentiate(1);
        let mut out = [Jet::zero(ord); 3];
        for i in 0..3 {
            out[i] = pr
                .mul(&self.q[i][0].truncated(ord.min(self.q[i][0].order())))
                .add(&ps.mul(&self.q[i][1].truncated(ord.min(self.q[i][1].order()))));
        }
        out
    }

    /// Tangential derivatives of the Weingarten map: out[k] = dGamma_k H.
    pub fn weingarten_derivs(&self) -> [Matrix3<f64>; 3] {
        let h = self.h.as_ref().expect("needs order >= 3 frame");
        let mut out = [Matrix3::zeros(); 3];
        for i in 0..3 {
            for j in 0..3 {
                let g = self.tangential_gradient(&h[i][j]);
                for k in 0..3 {
                    out[k][(i, j)] = g[k].val();
                }
            }
        }
        out
    }
}

/// Plain-value geometry packet at one integration point.
#[derive(Clone, Debug)]
pub struct SurfaceFrame {
    pub x: Vector3<f64>,
    pub jac: Matrix3x2<f64>,
    pub metric: Matrix2<f64>,
    pub normal: Vector3<f64>,
    pub projector: Matrix3<f64>,
    pub q: Matrix3x2<f64>,
    /// Weingarten map (zero matrix when built from an order-1 frame).
    pub weingarten: Matrix3<f64>,
    pub kappa1: f64,
    pub kappa2: f64,
    /// Trace of the Weingarten map; equals -(kappa1 + kappa2) under the
    /// sign convention kappa = -eig(H).
    pub mean_curvature: f64,
    pub gauss_curvature: f64,
    /// Surface measure density sqrt(det G).
    pub area_density: f64,
    /// Boundary tangent and outward co-normal, set only on boundary points.
    pub boundary: Option<BoundaryFrame>,
}

#[derive(Clone, Debug)]
pub struct BoundaryFrame {
    /// Unit tangent along the boundary, oriented so that
    /// n_conormal = n_Gamma x t.
    pub tangent: Vector3<f64>,
    /// Unit outward co-normal, perpendicular to the boundary in the
    /// tangent plane.
    pub conormal: Vector3<f64>,
}

impl SurfaceFrame {
    pub fn from_jets(jets: &FrameJets) -> Self {
        let val3 = |a: &[Jet; 3]| Vector3::new(a[0].val(), a[1].val(), a[2].val());
        let x = val3(&jets.x);
        let jr = val3(&jets.j_r);
        let js = val3(&jets.j_s);
        let jac = Matrix3x2::from_columns(&[jr, js]);
        let metric = Matrix2::new(jr.dot(&jr), jr.dot(&js), jr.dot(&js), js.dot(&js));
        let normal = val3(&jets.n);
        let mut projector = Matrix3::zeros();
        let mut q = Matrix3x2::zeros();
        for i in 0..3 {
            for j in 0..3 {
                projector[(i, j)] = jets.p[i][j].val();
            }
            q[(i, 0)] = jets.q[i][0].val();
            q[(i, 1)] = jets.q[i][1].val();
        }
        let weingarten = match &jets.h {
            Some(h) => {
                let mut m = Matrix3::zeros();
                for i in 0..3 {
                    for j in 0..3 {
                        m[(i, j)] = h[i][j].val();
                    }
                }
                m
            }
            None => Matrix3::zeros(),
        };
        let (kappa1, kappa2) = principal_curvatures(&weingarten, &normal);
        SurfaceFrame {
            x,
            jac,
            metric,
            normal,
            projector,
            q,
            weingarten,
            kappa1,
            kappa2,
            mean_curvature: weingarten.trace(),
            gauss_curvature: kappa1 * kappa2,
            area_density: jets.area_density.val(),
            boundary: None,
        }
    }

    /// Populate the boundary tangent/co-normal pair. `along` is the
    /// parametric direction running along the edge (0 = r, 1 = s) and
    /// `outward_sign` the sign of the *other* parametric direction that
    /// points out of the domain.
    pub fn with_boundary(mut self, along: usize, outward_sign: f64) -> Self {
        let t_raw = self.jac.column(along).into_owned();
        let o_raw = self.jac.column(1 - along).into_owned() * outward_sign;
        // Gram-Schmidt: outward direction orthogonal to the edge tangent
        let t_unit = t_raw.normalize();
        let conormal = (o_raw - t_unit * o_raw.dot(&t_unit)).normalize();
        // orient the tangent so that conormal = n x t
        let t_oriented = conormal.cross(&self.normal);
        self.boundary = Some(BoundaryFrame {
            tangent: t_oriented,
            conormal,
        });
        self
    }
}

/// The two in-plane eigenvalues of H, negated (kappa = -eig H), sorted
/// descending. The eigenpair closest to the normal direction is dropped.
pub fn principal_curvatures(weingarten: &Matrix3<f64>, normal: &Vector3<f64>) -> (f64, f64) {
    let sym = (weingarten + weingarten.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(sym);
    let mut vals = Vec::with_capacity(3);
    for k in 0..3 {
        let v = eig.eigenvectors.column(k);
        vals.push((v.dot(normal).abs(), eig.eigenvalues[k]));
    }
    // discard the eigenpair aligned with the normal
    vals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut k = [-vals[0].1, -vals[1].1];
    k.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (k[0], k[1])
}

/// The orthogonal projector P = I - n (x) n for a unit normal.
pub fn projector(normal: &Vector3<f64>) -> Result<Matrix3<f64>> {
    let nn = normal.norm();
    if (nn - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitNormal(nn));
    }
    Ok(Matrix3::identity() - normal * normal.transpose())
}

pub(crate) fn jet_dot(a: &[Jet; 3], b: &[Jet; 3]) -> Jet {
    a[0].mul(&b[0]).add(&a[1].mul(&b[1])).add(&a[2].mul(&b[2]))
}

pub(crate) fn jet_cross(a: &[Jet; 3], b: &[Jet; 3]) -> [Jet; 3] {
    [
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ]
}

fn vec_norm_val(a: &[Jet; 3]) -> f64 {
    (a[0].val().powi(2) + a[1].val().powi(2) + a[2].val().powi(2)).sqrt()
}
