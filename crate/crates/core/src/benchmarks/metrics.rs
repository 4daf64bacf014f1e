//! Error norms, the residual error, and per-case metric extraction.

use nalgebra::Vector3;

use super::cases::{build_model, CaseId, FlatShellExact};
use crate::assembly::{assemble_and_solve, ShellModel, Solution, SolveOptions};
use crate::error::{Error, Result};
use crate::geometry::GeometryMap;
use crate::quadrature::gauss_rule_on;
use crate::shell::{stress_resultants, strong_form, FieldJets};
use crate::tdc::FrameJets;

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Gauss points per direction for the stiffness; defaults to p + 1.
    pub quad: Option<usize>,
    /// Evaluate the residual error (needs degree >= 4).
    pub residual: bool,
    /// Cross-check every element against the curvilinear oracle.
    pub oracle: bool,
    /// Record wall-clock time (makes reports nondeterministic).
    pub timing: bool,
    /// Sampling grid refinement for displacement extraction.
    pub extract_grid: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            quad: None,
            residual: false,
            oracle: false,
            timing: false,
            extract_grid: 4,
        }
    }
}

/// Metrics of one (case, p, n) cell. Fields that a case does not produce
/// stay `None` and print as empty CSV entries.
#[derive(Clone, Debug, Default)]
pub struct CellMetrics {
    pub dofs: usize,
    pub err_u: Option<f64>,
    pub err_n: Option<f64>,
    pub err_m: Option<f64>,
    pub err_q: Option<f64>,
    pub residual: Option<f64>,
    pub uz_max: Option<f64>,
    pub u_load: Option<f64>,
    pub energy: Option<f64>,
    pub runtime_s: Option<f64>,
    /// Max normal displacement (flat shell); not a CSV column.
    pub un_max: Option<f64>,
    /// Worst relative element-stiffness gap against the curvilinear
    /// oracle, when requested; not a CSV column.
    pub oracle_gap: Option<f64>,
    pub condition_estimate: Option<f64>,
    pub dropped_constraints: usize,
}

/// Relative L2 errors of the flat-shell solution against the
/// manufactured exact fields: displacements, physical normal forces,
/// moments, transverse shear.
pub fn flat_shell_l2_errors(
    model: &ShellModel,
    solution: &Solution,
    exact: &FlatShellExact,
) -> Result<[f64; 4]> {
    let (pu, pv) = model.space.degrees();
    let qn = pu.max(pv) + 2;
    let mut num = [0.0; 4];
    let mut den = [0.0; 4];
    for elem in model.space.elements() {
        let rule = gauss_rule_on(qn, elem.r0, elem.r1, elem.s0, elem.s1)?;
        for (q, &(r, s)) in rule.points.iter().enumerate() {
            let frame = FrameJets::build(model.geometry.jets(r, s, 4)?, (r, s))?;
            let basis = model.space.eval_basis(elem.id, (r, s), 4)?;
            let u_h = solution.displacement.jets(&basis);
            let u_ex = exact.field_jets(r, s, 4);
            let dv = rule.weights[q] * frame.area_density.val();

            let du = u_h.value() - u_ex.value();
            num[0] += dv * du.norm_squared();
            den[0] += dv * u_ex.value().norm_squared();

            let rh = stress_resultants(&u_h, &frame, &model.material)?;
            let rx = stress_resultants(&u_ex, &frame, &model.material)?;
            num[1] += dv * (rh.physical_normal - rx.physical_normal).norm_squared();
            den[1] += dv * rx.physical_normal.norm_squared();
            num[2] += dv * (rh.moment - rx.moment).norm_squared();
            den[2] += dv * rx.moment.norm_squared();
            num[3] += dv * (rh.shear - rx.shear).norm_squared();
            den[3] += dv * rx.shear.norm_squared();
        }
    }
    let mut out = [0.0; 4];
    for k in 0..4 {
        out[k] = if den[k] > 0.0 {
            (num[k] / den[k]).sqrt()
        } else if num[k] > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
    }
    Ok(out)
}

/// Residual error: element-wise accumulated relative L2 norm of
/// L(u_h) + f over the patch. Degenerate 0/0 input is defined as 0.
pub fn residual_error(model: &ShellModel, solution: &Solution) -> Result<f64> {
    residual_error_of_field(model, |basis| Ok(solution.displacement.jets(basis)))
}

/// Residual of an arbitrary displacement field given per-point jets
/// (order 4); used both for discrete solutions and injected exact fields.
pub fn residual_error_of_field(
    model: &ShellModel,
    field_at: impl Fn(&crate::nurbs::BasisEval) -> Result<FieldJets> + Sync,
) -> Result<f64> {
    let (pu, pv) = model.space.degrees();
    if pu.min(pv) < 4 {
        return Err(Error::ResidualDegreeTooLow(pu.min(pv)));
    }
    let qn = (pu.max(pv) + 2).min(16);
    let mut num = 0.0;
    let mut den = 0.0;
    for elem in model.space.elements() {
        let rule = gauss_rule_on(qn, elem.r0, elem.r1, elem.s0, elem.s1)?;
        for (q, &(r, s)) in rule.points.iter().enumerate() {
            let frame = FrameJets::build(model.geometry.jets(r, s, 4)?, (r, s))?;
            let basis = model.space.eval_basis(elem.id, (r, s), 4)?;
            let u_h = field_at(&basis)?;
            let l = strong_form(&u_h, &frame, &model.material)?;
            let f = model.load.eval(r, s);
            let dv = rule.weights[q] * frame.area_density.val();
            num += dv * (l + f).norm_squared();
            den += dv * f.norm_squared();
        }
    }
    Ok(if den > 0.0 {
        (num / den).sqrt()
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        0.0
    })
}

/// Sample the displacement on a closed per-element grid; returns
/// (max |u . n|, max |u_z|, u at a requested parametric point).
fn sample_displacement(
    model: &ShellModel,
    solution: &Solution,
    grid: usize,
    probe: Option<(f64, f64)>,
) -> Result<(f64, f64, Option<Vector3<f64>>)> {
    let mut un_max = 0.0f64;
    let mut uz_max = 0.0f64;
    for elem in model.space.elements() {
        for i in 0..=grid {
            for j in 0..=grid {
                let r = elem.r0 + (elem.r1 - elem.r0) * i as f64 / grid as f64;
                let s = elem.s0 + (elem.s1 - elem.s0) * j as f64 / grid as f64;
                let basis = model.space.eval_basis(elem.id, (r, s), 0)?;
                let u = solution.displacement.jets(&basis).value();
                let frame = FrameJets::build(model.geometry.jets(r, s, 1)?, (r, s))?;
                let n = Vector3::new(frame.n[0].val(), frame.n[1].val(), frame.n[2].val());
                un_max = un_max.max(u.dot(&n).abs());
                uz_max = uz_max.max(u.z.abs());
            }
        }
    }
    let probe_val = match probe {
        Some((r, s)) => {
            let elem = model.space.element_containing(r, s)?;
            let basis = model.space.eval_basis(elem, (r, s), 0)?;
            Some(solution.displacement.jets(&basis).value())
        }
        None => None,
    };
    Ok((un_max, uz_max, probe_val))
}

/// Worst relative gap between the tangential and curvilinear element
/// stiffness over all elements.
pub fn oracle_gap(model: &ShellModel, quad: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for elem in model.space.elements() {
        let tdc = crate::assembly::element_stiffness(
            model,
            elem,
            quad,
            crate::assembly::BendingForm::Directional,
        )?;
        let classical = crate::classical::element_stiffness_classical(model, elem, quad)?;
        let k_t = tdc.stiffness();
        let k_c = classical.stiffness();
        let gap = (&k_t - &k_c).norm() / k_t.norm().max(1e-300);
        worst = worst.max(gap);
    }
    Ok(worst)
}

/// Solve one study cell and extract its metrics.
pub fn run_cell(case: CaseId, p: usize, n: usize, opts: &RunOptions) -> Result<CellMetrics> {
    let model = build_model(case, p, n)?;
    run_cell_on(case, &model, opts)
}

pub fn run_cell_on(case: CaseId, model: &ShellModel, opts: &RunOptions) -> Result<CellMetrics> {
    let start = std::time::Instant::now();
    let solution = assemble_and_solve(model, SolveOptions { quad_points: opts.quad })?;
    let mut m = CellMetrics {
        dofs: model.n_dofs(),
        energy: Some(solution.energy),
        condition_estimate: Some(solution.condition_estimate),
        dropped_constraints: solution.dropped_constraints,
        ..CellMetrics::default()
    };

    match case {
        CaseId::FlatShell => {
            let exact = FlatShellExact {
                rotation: super::cases::flat_shell_rotation(),
            };
            let errs = flat_shell_l2_errors(model, &solution, &exact)?;
            m.err_u = Some(errs[0]);
            m.err_n = Some(errs[1]);
            m.err_m = Some(errs[2]);
            m.err_q = Some(errs[3]);
            let (un_max, _, _) = sample_displacement(model, &solution, opts.extract_grid, None)?;
            m.un_max = Some(un_max);
            if opts.residual {
                m.residual = Some(residual_error(model, &solution)?);
            }
        }
        CaseId::ScordelisLo => {
            let (_, uz, _) = sample_displacement(model, &solution, opts.extract_grid, None)?;
            m.uz_max = Some(uz);
        }
        CaseId::PinchedCylinder => {
            let (_, _, probe) = sample_displacement(model, &solution, 1, Some((0.0, 0.0)))?;
            // radial displacement at the load point: inward is -u_z at the crown
            m.u_load = Some(-probe.unwrap().z);
        }
        CaseId::Flower => {
            if opts.residual {
                m.residual = Some(residual_error(model, &solution)?);
            }
        }
    }

    if opts.oracle {
        let quad = opts.quad.unwrap_or_else(|| model.default_quad_points());
        m.oracle_gap = Some(oracle_gap(model, quad)?);
    }
    if opts.timing {
        m.runtime_s = Some(start.elapsed().as_secs_f64());
    }
    Ok(m)
}
