//! Truncated bivariate Taylor arithmetic.
//!
//! A [`Jet`] carries the Taylor expansion of a smooth function of two
//! parameters `(r, s)` about a point, truncated at total degree
//! `order <= 4`. Propagating jets through the geometry map and the basis
//! functions yields exact mixed parametric derivatives of every derived
//! quantity (normals, projectors, curvature tensors, stress resultants)
//! without finite differencing. Mixed surface derivatives do not commute
//! on curved geometry, so downstream code keeps full unsymmetrized
//! derivative tensors; the jets themselves are ordinary commuting
//! parametric expansions.
//!
//! Monomials are ordered by total degree, then by the power of `s`:
//! `1, r, s, r^2, rs, s^2, r^3, ..., s^4` (15 coefficients at order 4).

pub const MAX_ORDER: usize = 4;
pub const N_COEFFS: usize = 15;

/// `MONO[k] = (a, b)` gives the powers of `r` and `s` for coefficient `k`.
pub const MONO: [(usize, usize); N_COEFFS] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
    (4, 0),
    (3, 1),
    (2, 2),
    (1, 3),
    (0, 4),
];

/// Number of monomials of total degree <= d.
#[inline]
pub const fn n_coeffs(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

/// Index of the monomial r^a s^b.
#[inline]
pub const fn mono_index(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

const FACT: [f64; 5] = [1.0, 1.0, 2.0, 6.0, 24.0];

/// Taylor expansion of a bivariate function, truncated at `order`.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    c: [f64; N_COEFFS],
    order: usize,
}

impl Jet {
    #[inline]
    pub fn constant(v: f64, order: usize) -> Self {
        debug_assert!(order <= MAX_ORDER);
        let mut c = [0.0; N_COEFFS];
        c[0] = v;
        Jet { c, order }
    }

    pub fn zero(order: usize) -> Self {
        Self::constant(0.0, order)
    }

    /// The coordinate `r` (axis 0) or `s` (axis 1) as a jet about `v`.
    pub fn variable(v: f64, axis: usize, order: usize) -> Self {
        let mut j = Self::constant(v, order);
        if order >= 1 {
            j.c[if axis == 0 { 1 } else { 2 }] = 1.0;
        }
        j
    }

    /// Build a jet from a table of partial derivatives `d[(a, b)]`.
    pub fn from_derivs(order: usize, mut deriv: impl FnMut(usize, usize) -> f64) -> Self {
        let mut c = [0.0; N_COEFFS];
        for k in 0..n_coeffs(order) {
            let (a, b) = MONO[k];
            c[k] = deriv(a, b) / (FACT[a] * FACT[b]);
        }
        Jet { c, order }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn val(&self) -> f64 {
        self.c[0]
    }

    /// Partial derivative d^{a+b} f / dr^a ds^b at the expansion point.
    #[inline]
    pub fn deriv(&self, a: usize, b: usize) -> f64 {
        debug_assert!(a + b <= self.order);
        self.c[mono_index(a, b)] * FACT[a] * FACT[b]
    }

    /// d/dr or d/ds, lowering the order by one.
    pub fn differentiate(&self, axis: usize) -> Jet {
        debug_assert!(self.order >= 1);
        let ord = self.order - 1;
        let mut out = Jet::zero(ord);
        for k in 0..n_coeffs(ord) {
            let (a, b) = MONO[k];
            out.c[k] = if axis == 0 {
                (a + 1) as f64 * self.c[mono_index(a + 1, b)]
            } else {
                (b + 1) as f64 * self.c[mono_index(a, b + 1)]
            };
        }
        out
    }

    /// Truncate to a lower order.
    pub fn truncated(&self, order: usize) -> Jet {
        debug_assert!(order <= self.order);
        let mut out = Jet::zero(order);
        out.c[..n_coeffs(order)].copy_from_slice(&self.c[..n_coeffs(order)]);
        out
    }

    #[inline]
    pub fn scale(&self, f: f64) -> Jet {
        let mut out = *self;
        for c in &mut out.c {
            *c *= f;
        }
        out
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let ord = self.order.min(other.order);
        let mut out = Jet::zero(ord);
        for i in 0..n_coeffs(ord) {
            let xi = self.c[i];
            if xi == 0.0 {
                continue;
            }
            let (ai, bi) = MONO[i];
            let rem = ord - ai - bi;
            for j in 0..n_coeffs(rem) {
                let (aj, bj) = MONO[j];
                out.c[mono_index(ai + aj, bi + bj)] += xi * other.c[j];
            }
        }
        out
    }

    /// Division by a jet with nonzero constant term, exact at the order.
    pub fn div(&self, other: &Jet) -> Jet {
        let ord = self.order.min(other.order);
        let inv0 = 1.0 / other.c[0];
        let mut out = Jet::zero(ord);
        for k in 0..n_coeffs(ord) {
            let (a, b) = MONO[k];
            let mut acc = self.c[k];
            // subtract contributions of already-known quotient coefficients
            for a2 in 0..=a {
                for b2 in 0..=b {
                    if a2 == a && b2 == b {
                        continue;
                    }
                    acc -= out.c[mono_index(a2, b2)] * other.c[mono_index(a - a2, b - b2)];
                }
            }
            out.c[k] = acc * inv0;
        }
        out
    }

    pub fn recip(&self) -> Jet {
        Jet::constant(1.0, self.order).div(self)
    }

    pub fn sqrt(&self) -> Jet {
        let ord = self.order;
        let z0 = self.c[0].sqrt();
        let half_inv = 0.5 / z0;
        let mut out = Jet::zero(ord);
        out.c[0] = z0;
        for k in 1..n_coeffs(ord) {
            let (a, b) = MONO[k];
            let mut acc = self.c[k];
            for a2 in 0..=a {
                for b2 in 0..=b {
                    if (a2 == 0 && b2 == 0) || (a2 == a && b2 == b) {
                        continue;
                    }
                    acc -= out.c[mono_index(a2, b2)] * out.c[mono_index(a - a2, b - b2)];
                }
            }
            out.c[k] = acc * half_inv;
        }
        out
    }

    pub fn sin(&self) -> Jet {
        self.sincos().0
    }

    pub fn cos(&self) -> Jet {
        self.sincos().1
    }

    /// Simultaneous sine and cosine via the nilpotent split f = f0 + g.
    pub fn sincos(&self) -> (Jet, Jet) {
        let ord = self.order;
        let (s0, c0) = self.c[0].sin_cos();
        let mut g = *self;
        g.c[0] = 0.0;
        let g2 = g.mul(&g);
        let g3 = g2.mul(&g);
        let g4 = g2.mul(&g2);
        // cos(g) = 1 - g^2/2 + g^4/24, sin(g) = g - g^3/6  (exact at order 4)
        let mut cos_g = Jet::constant(1.0, ord);
        cos_g = cos_g.add(&g2.scale(-0.5)).add(&g4.scale(1.0 / 24.0));
        let sin_g = g.add(&g3.scale(-1.0 / 6.0));
        let sin = sin_g.scale(c0).add(&cos_g.scale(s0));
        let cos = cos_g.scale(c0).add(&sin_g.scale(-s0));
        (sin, cos)
    }

    #[inline]
    pub fn add(&self, other: &Jet) -> Jet {
        let ord = self.order.min(other.order);
        let mut out = Jet::zero(ord);
        for k in 0..n_coeffs(ord) {
            out.c[k] = self.c[k] + other.c[k];
        }
        out
    }

    #[inline]
    pub fn sub(&self, other: &Jet) -> Jet {
        let ord = self.order.min(other.order);
        let mut out = Jet::zero(ord);
        for k in 0..n_coeffs(ord) {
            out.c[k] = self.c[k] - other.c[k];
        }
        out
    }

    #[inline]
    pub fn neg(&self) -> Jet {
        self.scale(-1.0)
    }

    #[inline]
    pub fn add_scalar(&self, v: f64) -> Jet {
        let mut out = *self;
        out.c[0] += v;
        out
    }

    /// Accumulate `f * other` into `self` (orders must match).
    #[inline]
    pub fn axpy(&mut self, f: f64, other: &Jet) {
        debug_assert_eq!(self.order, other.order);
        for k in 0..n_coeffs(self.order) {
            self.c[k] += f * other.c[k];
        }
    }
}
