//! Knot vectors, open (clamped) and periodic.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KnotKind {
    /// Clamped: first and last knot repeated degree + 1 times.
    Open,
    /// Uniform periodic over the domain; basis indices wrap modulo the
    /// span count. Used for surfaces that close on themselves in one
    /// parametric direction.
    Periodic,
}

#[derive(Clone, Debug)]
pub struct KnotVector {
    knots: Vec<f64>,
    degree: usize,
    kind: KnotKind,
}

impl KnotVector {
    /// Validated open (clamped) knot vector.
    pub fn open(knots: Vec<f64>, degree: usize) -> Result<Self> {
        if degree < 1 {
            return Err(Error::InvalidKnots("degree must be >= 1".into()));
        }
        let p = degree;
        if knots.len() < 2 * (p + 1) {
            return Err(Error::InvalidKnots(format!(
                "need at least {} knots for degree {}, got {}",
                2 * (p + 1),
                p,
                knots.len()
            )));
        }
        if knots.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidKnots("knots must be nondecreasing".into()));
        }
        let first = knots[0];
        let last = *knots.last().unwrap();
        if knots[..=p].iter().any(|&k| k != first) || knots[knots.len() - p - 1..].iter().any(|&k| k != last) {
            return Err(Error::InvalidKnots(
                "open knot vector must repeat the end knots degree + 1 times".into(),
            ));
        }
        if last <= first {
            return Err(Error::InvalidKnots("empty parametric domain".into()));
        }
        // interior multiplicity <= p
        let interior = &knots[p + 1..knots.len() - p - 1];
        let mut run = 1usize;
        for w in interior.windows(2) {
            run = if w[1] == w[0] { run + 1 } else { 1 };
            if run > p {
                return Err(Error::InvalidKnots(format!(
                    "interior knot multiplicity {run} exceeds degree {p}"
                )));
            }
        }
        Ok(KnotVector {
            knots,
            degree,
            kind: KnotKind::Open,
        })
    }

    /// Open uniform knot vector with `n_spans` equal spans on [lo, hi].
    pub fn open_uniform(lo: f64, hi: f64, n_spans: usize, degree: usize) -> Result<Self> {
        if n_spans == 0 {
            return Err(Error::InvalidKnots("need at least one span".into()));
        }
        let mut knots = vec![lo; degree + 1];
        for i in 1..n_spans {
            knots.push(lo + (hi - lo) * i as f64 / n_spans as f64);
        }
        knots.extend(std::iter::repeat(hi).take(degree + 1));
        Self::open(knots, degree)
    }

    /// Uniform periodic knot vector with `n_spans` spans on [lo, hi].
    /// The knots extend `degree` spans beyond each end; basis function
    /// indices wrap modulo `n_spans`.
    pub fn periodic_uniform(lo: f64, hi: f64, n_spans: usize, degree: usize) -> Result<Self> {
        if degree < 1 {
            return Err(Error::InvalidKnots("degree must be >= 1".into()));
        }
        if n_spans <= degree {
            return Err(Error::InvalidKnots(format!(
                "periodic direction needs more spans ({n_spans}) than the degree ({degree})"
            )));
        }
        let h = (hi - lo) / n_spans as f64;
        let total = n_spans + 2 * degree + 1;
        let knots = (0..total)
            .map(|i| lo + h * (i as f64 - degree as f64))
            .collect();
        Ok(KnotVector {
            knots,
            degree,
            kind: KnotKind::Periodic,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> KnotKind {
        self.kind
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn domain(&self) -> (f64, f64) {
        let p = self.degree;
        (self.knots[p], self.knots[self.knots.len() - 1 - p])
    }

    /// Number of independent basis functions.
    pub fn num_basis(&self) -> usize {
        match self.kind {
            KnotKind::Open => self.knots.len() - self.degree - 1,
            KnotKind::Periodic => self.n_spans(),
        }
    }

    /// Number of nonzero-length knot spans in the domain.
    pub fn n_spans(&self) -> usize {
        let p = self.degree;
        self.knots[p..self.knots.len() - p]
            .windows(2)
            .filter(|w| w[1] > w[0])
            .count()
    }

    /// Knot-array indices of the nonzero domain spans, in order.
    pub fn span_indices(&self) -> Vec<usize> {
        let p = self.degree;
        (p..self.knots.len() - p - 1)
            .filter(|&i| self.knots[i + 1] > self.knots[i])
            .collect()
    }

    pub fn span_range(&self, span: usize) -> (f64, f64) {
        (self.knots[span], self.knots[span + 1])
    }

    /// Fold a raw basis index (span - degree + local) to the global index.
    #[inline]
    pub fn global_index(&self, raw: usize) -> usize {
        match self.kind {
            KnotKind::Open => raw,
            KnotKind::Periodic => raw % self.n_spans(),
        }
    }
}
