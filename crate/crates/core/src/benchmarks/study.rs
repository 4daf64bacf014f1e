//! Convergence studies over (p, n) grids and their CSV reports.

use rayon::prelude::*;

use super::cases::CaseId;
use super::metrics::{run_cell, CellMetrics, RunOptions};

pub const DEFAULT_P_LIST: [usize; 5] = [2, 3, 4, 5, 6];
pub const DEFAULT_N_LIST: [usize; 5] = [2, 4, 8, 16, 32];

pub const CSV_HEADER: &str =
    "case,p,n,h,dofs,err_u,err_n,err_m,err_q,residual,uz_max,u_load,energy,runtime_s";

#[derive(Clone, Debug)]
pub struct StudyRow {
    pub case: CaseId,
    pub p: usize,
    pub n: usize,
    pub h: f64,
    pub metrics: CellMetrics,
}

#[derive(Clone, Debug)]
pub struct CellFailure {
    pub p: usize,
    pub n: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct ConvergenceReport {
    pub rows: Vec<StudyRow>,
    pub failures: Vec<CellFailure>,
}

/// Run the full p x n matrix. Cells run in parallel; results are reduced
/// in (p, n) order so reports are deterministic regardless of the thread
/// count. Per-cell failures are recorded and the study continues.
pub fn convergence_study(
    case: CaseId,
    p_list: &[usize],
    n_list: &[usize],
    opts: &RunOptions,
) -> ConvergenceReport {
    let cells: Vec<(usize, usize)> = p_list
        .iter()
        .flat_map(|&p| n_list.iter().map(move |&n| (p, n)))
        .collect();
    let results: Vec<(usize, usize, Result<CellMetrics, String>)> = cells
        .par_iter()
        .map(|&(p, n)| (p, n, run_cell(case, p, n, opts).map_err(|e| e.to_string())))
        .collect();

    let mut report = ConvergenceReport::default();
    for (p, n, res) in results {
        match res {
            Ok(metrics) => report.rows.push(StudyRow {
                case,
                p,
                n,
                h: 1.0 / n as f64,
                metrics,
            }),
            Err(message) => report.failures.push(CellFailure { p, n, message }),
        }
    }
    report
}

/// 17-significant-digit float formatting (round-trip exact).
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

impl ConvergenceReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let m = &row.metrics;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                row.case.name(),
                row.p,
                row.n,
                fmt_float(row.h),
                m.dofs,
                fmt_opt(m.err_u),
                fmt_opt(m.err_n),
                fmt_opt(m.err_m),
                fmt_opt(m.err_q),
                fmt_opt(m.residual),
                fmt_opt(m.uz_max),
                fmt_opt(m.u_load),
                fmt_opt(m.energy),
                fmt_opt(m.runtime_s),
            ));
        }
        out
    }

    /// Rows of one polynomial degree, ordered by n.
    pub fn rows_for_p(&self, p: usize) -> Vec<&StudyRow> {
        let mut rows: Vec<&StudyRow> = self.rows.iter().filter(|r| r.p == p).collect();
        rows.sort_by_key(|r| r.n);
        rows
    }

    /// Least-squares log-log slope of a metric over the finest `window`
    /// meshes of degree p. The slope is reported against h, so positive
    /// values mean convergence.
    pub fn slope(
        &self,
        p: usize,
        window: usize,
        metric: impl Fn(&CellMetrics) -> Option<f64>,
    ) -> Option<f64> {
        let rows = self.rows_for_p(p);
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter_map(|r| metric(&r.metrics).map(|v| (r.h, v)))
            .filter(|&(_, v)| v > 0.0 && v.is_finite())
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let tail = &pts[pts.len().saturating_sub(window)..];
        Some(loglog_slope(tail))
    }
}

/// Least-squares slope of log(e) against log(h).
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(h, e) in points {
        let (x, y) = (h.ln(), e.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
