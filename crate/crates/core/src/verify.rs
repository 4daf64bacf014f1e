//! The verification suite: operator property checks, finite-difference
//! derivative checks, and the differential test of the tangential element
//! stiffness against the curvilinear one. Shared by the command-line
//! `verify` front end and the integration tests.

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::assembly::{BcKind, BendingForm, Edge, Load, ShellModel};
use crate::benchmarks::cases;
use crate::error::Result;
use crate::geometry::{AnalyticSurface, Geometry, GeometryMap};
use crate::nurbs::{KnotVector, NurbsPatch, SplineSpace};
use crate::shell::Material;
use crate::tdc::{frame_at, frame_jets_at, ShapeDerivs, SurfaceFrame};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Flip the sign of the Weingarten map before the curvature checks;
    /// proves the suite detects a curvature-convention bug.
    WeingartenSignFlip,
}

impl Fault {
    pub fn parse(s: &str) -> Option<Fault> {
        match s {
            "h-sign-flip" => Some(Fault::WeingartenSignFlip),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub fuzz_trials: usize,
    pub inject: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0x5eed,
            fuzz_trials: 100,
            inject: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name,
        passed,
        detail,
    }
}

/// Run the whole suite; every entry prints one pass/fail line through the
/// caller.
pub fn run_all(opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(projector_invariants());
    out.push(frame_invariants());
    out.push(curvature_oracles(opts.inject));
    out.push(gradient_route_equivalence());
    out.push(derivative_chain_checks());
    out.push(rigid_mode_count());
    out.push(bending_form_equivalence());
    out.push(resultant_identities());
    out.push(oracle_benchmark_patches());
    out.push(oracle_fuzz(opts.seed, opts.fuzz_trials));
    out
}

fn sample_frames() -> Vec<(&'static str, SurfaceFrame)> {
    vec![
        ("sphere", frame_at(&AnalyticSurface::sphere(2.0), 0.3, 0.8, 3).unwrap()),
        (
            "cylinder",
            frame_at(&AnalyticSurface::cylinder(25.0, 50.0), 12.0, 0.5, 3).unwrap(),
        ),
        ("torus", frame_at(&AnalyticSurface::torus(2.0, 0.5), 1.0, 2.0, 3).unwrap()),
    ]
}

fn projector_invariants() -> CheckResult {
    let mut worst: f64 = 0.0;
    for (_, f) in sample_frames() {
        let p = f.projector;
        worst = worst.max((p * p - p).norm());
        worst = worst.max((p - p.transpose()).norm());
        worst = worst.max((p * f.normal).norm());
    }
    // the benchmark normal: eigenvalues {1, 1, 0}
    let n = Vector3::new(-0.25, -3.0f64.sqrt() / 2.0, 3.0f64.sqrt() / 4.0);
    let p = crate::tdc::projector(&n).unwrap();
    let eig = nalgebra::SymmetricEigen::new(p);
    let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let eig_ok = ev[0].abs() < 1e-13 && (ev[1] - 1.0).abs() < 1e-13 && (ev[2] - 1.0).abs() < 1e-13;
    check(
        "projector-invariants",
        worst <= 1e-12 && eig_ok,
        format!("max defect {worst:.2e}"),
    )
}

fn frame_invariants() -> CheckResult {
    let mut worst: f64 = 0.0;
    for (_, f) in sample_frames() {
        let h = f.weingarten;
        let scale = h.norm().max(1.0);
        worst = worst.max((h - h.transpose()).norm() / scale);
        worst = worst.max((h * f.normal).norm() / scale);
        worst = worst.max((f.projector * h * f.projector - h).norm() / scale);
    }
    check(
        "weingarten-structure",
        worst <= 1e-10,
        format!("max defect {worst:.2e}"),
    )
}

fn curvature_oracles(inject: Option<Fault>) -> CheckResult {
    let flip = if inject == Some(Fault::WeingartenSignFlip) {
        -1.0
    } else {
        1.0
    };
    let mut msgs = Vec::new();
    let mut ok = true;
    // cylinder of the roof benchmark
    let f = frame_at(&AnalyticSurface::cylinder(25.0, 50.0), 12.0, 0.5, 2).unwrap();
    let (k1, k2) = crate::tdc::principal_curvatures(&(f.weingarten * flip), &f.normal);
    if (k1 - 1.0 / 25.0).abs() > 1e-11 || k2.abs() > 1e-11 {
        ok = false;
        msgs.push(format!("cylinder kappa = ({k1:.3e}, {k2:.3e}), want (4e-2, 0)"));
    }
    // sphere
    let f = frame_at(&AnalyticSurface::sphere(2.0), 0.4, 1.0, 2).unwrap();
    let (k1, k2) = crate::tdc::principal_curvatures(&(f.weingarten * flip), &f.normal);
    if (k1 - 0.5).abs() > 1e-11 || (k2 - 0.5).abs() > 1e-11 {
        ok = false;
        msgs.push(format!("sphere kappa = ({k1:.3e}, {k2:.3e}), want (0.5, 0.5)"));
    }
    check(
        "curvature-oracles",
        ok,
        if msgs.is_empty() {
            "cylinder 1/25, sphere 1/R".into()
        } else {
            msgs.join("; ")
        },
    )
}

fn gradient_route_equivalence() -> CheckResult {
    let geom = AnalyticSurface::sphere(1.5);
    let mut worst: f64 = 0.0;
    for &(r, s) in &[(0.3, 0.7), (-0.4, 2.0), (0.9, 4.0)] {
        let jets = frame_jets_at(&geom, r, s, 2).unwrap();
        let f = SurfaceFrame::from_jets(&jets);
        let g = jets.tangential_gradient(&jets.x[2]);
        let pullback = Vector3::new(g[0].val(), g[1].val(), g[2].val());
        let extension = f.projector * Vector3::new(0.0, 0.0, 1.0);
        worst = worst.max((pullback - extension).norm());
    }
    check(
        "gradient-route-equivalence",
        worst <= 1e-10,
        format!("max gap {worst:.2e}"),
    )
}

fn derivative_chain_checks() -> CheckResult {
    // chain-rule finite-difference checks of tangential derivative orders
    // 1..4 on a torus with a quartic spline space
    let geom = AnalyticSurface::torus(2.0, 0.6);
    let space = SplineSpace::new(
        KnotVector::open_uniform(0.4, 1.4, 2, 4).unwrap(),
        KnotVector::open_uniform(0.4, 1.4, 2, 4).unwrap(),
        None,
    )
    .unwrap();
    let (r, s) = (0.7, 0.8);
    let elem = space.element_containing(r, s).unwrap();
    let jets = frame_jets_at(&geom, r, s, 4).unwrap();
    let basis = space.eval_basis(elem, (r, s), 4).unwrap();
    let sd = ShapeDerivs::compute(&basis, &jets, 4).unwrap();
    let jcol = SurfaceFrame::from_jets(&jets).jac.column(0).into_owned();
    let h = 1e-5;
    let eval = |rr: f64, ss: f64, order: usize| {
        let j = frame_jets_at(&geom, rr, ss, 4).unwrap();
        let b = space.eval_basis(elem, (rr, ss), 4).unwrap();
        ShapeDerivs::compute(&b, &j, order).unwrap()
    };
    let dp = eval(r + h, s, 3);
    let dm = eval(r - h, s, 3);
    let mut worst: f64 = 0.0;
    for k in [0usize, 6, 17] {
        // order 1 -> 2
        let fd1 = (dp.grad[k] - dm.grad[k]) / (2.0 * h);
        worst = worst.max((fd1 - sd.hess_dir[k] * jcol).norm() / fd1.norm().max(1.0));
        // order 3 -> 4
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let fd = (dp.d3[k][crate::tdc::idx3(a, b, c)]
                        - dm.d3[k][crate::tdc::idx3(a, b, c)])
                        / (2.0 * h);
                    let mut chain = 0.0;
                    for d in 0..3 {
                        chain += sd.d4[k][crate::tdc::idx4(a, b, c, d)] * jcol[d];
                    }
                    worst = worst.max((fd - chain).abs() / chain.abs().max(100.0));
                }
            }
        }
    }
    check(
        "derivative-fd-chain",
        worst <= 1e-3,
        format!("max relative gap {worst:.2e}"),
    )
}

fn rigid_mode_count() -> CheckResult {
    // free flat patch: exactly six numerically zero stiffness eigenvalues
    let rotation = cases::flat_shell_rotation();
    let model = match free_flat_model(rotation) {
        Ok(m) => m,
        Err(e) => return check("rigid-modes", false, e.to_string()),
    };
    let system = match crate::assembly::assemble(&model, Default::default()) {
        Ok(s) => s,
        Err(e) => return check("rigid-modes", false, e.to_string()),
    };
    let n = system.n_dofs;
    let mut k = nalgebra::DMatrix::<f64>::zeros(n, n);
    for &(i, j, v) in &system.k {
        k[(i, j)] += v;
    }
    let eig = nalgebra::SymmetricEigen::new((k.clone() + k.transpose()) * 0.5);
    let max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let zeros = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l.abs() <= 1e-9 * max)
        .count();
    check(
        "rigid-modes",
        zeros == 6,
        format!("{zeros} zero eigenvalues (want 6), lambda_max {max:.3e}"),
    )
}

fn free_flat_model(rotation: Matrix3<f64>) -> Result<ShellModel> {
    let kv = KnotVector::open(vec![0.0, 0.0, 1.0, 1.0], 1)?;
    let corners: Vec<Vector3<f64>> = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
        .iter()
        .map(|&(a, b)| rotation.column(0) * a + rotation.column(1) * b)
        .collect();
    let patch = NurbsPatch::new(kv.clone(), kv, corners, vec![1.0; 4])?
        .elevated_to(2, 2)?
        .refined_uniform(3, 3)?;
    let space = patch.space().clone();
    Ok(ShellModel {
        geometry: Geometry::Nurbs(patch),
        space,
        material: Material::new(100.0, 0.3, 0.05)?,
        bcs: vec![],
        point_pins: vec![],
        load: Load::None,
        point_loads: vec![],
    })
}

fn bending_form_equivalence() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let model = match fuzz_model(&mut rng) {
        Ok(m) => m,
        Err(e) => return check("bending-form-equivalence", false, e.to_string()),
    };
    let mut worst: f64 = 0.0;
    for elem in model.space.elements() {
        let quad = model.default_quad_points();
        let dir =
            crate::assembly::element_stiffness(&model, elem, quad, BendingForm::Directional);
        let cov = crate::assembly::element_stiffness(&model, elem, quad, BendingForm::Covariant);
        match (dir, cov) {
            (Ok(a), Ok(b)) => {
                let gap = (&a.k_bending - &b.k_bending).norm() / a.k_bending.norm().max(1e-300);
                worst = worst.max(gap);
            }
            _ => return check("bending-form-equivalence", false, "element failure".into()),
        }
    }
    check(
        "bending-form-equivalence",
        worst <= 1e-11,
        format!("max relative gap {worst:.2e}"),
    )
}

fn resultant_identities() -> CheckResult {
    use crate::shell::FieldJets;
    let geom = AnalyticSurface::torus(2.0, 0.6);
    let mat = Material::new(500.0, 0.3, 0.02).unwrap();
    let x = geom.jets(0.9, 1.3, 3).unwrap();
    let frame = crate::tdc::FrameJets::build(x.clone(), (0.9, 1.3)).unwrap();
    let field = FieldJets::new([
        x[1].mul(&x[2]).scale(1e-2),
        x[0].mul(&x[0]).scale(2e-3),
        x[2].mul(&x[1]).scale(5e-3),
    ]);
    let r = crate::shell::stress_resultants(&field, &frame, &mat).unwrap();
    let h = Matrix3::from_fn(|i, j| frame.h.as_ref().unwrap()[i][j].val());
    let n = Vector3::new(frame.n[0].val(), frame.n[1].val(), frame.n[2].val());
    let gap = (r.physical_normal - r.effective_normal - h * r.moment).norm()
        / r.physical_normal.norm().max(1e-300);
    let w = crate::shell::difference_vector(&field, &frame);
    let tangency = w.dot(&n).abs() / w.norm().max(1e-300);
    let in_plane = (r.moment * n).norm() / r.moment.norm().max(1e-300);
    let ok = gap <= 1e-12 && tangency <= 1e-11 && in_plane <= 1e-11;
    check(
        "resultant-identities",
        ok,
        format!("identity {gap:.2e}, tangency {tangency:.2e}, in-plane {in_plane:.2e}"),
    )
}

fn oracle_benchmark_patches() -> CheckResult {
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    let models = [
        ("flat", cases::flat_shell_model(3, 2, true)),
        ("scordelis_lo", cases::scordelis_lo_model(3, 3)),
        ("pinched", cases::pinched_cylinder_model(3, 3)),
        ("flower", cases::flower_model(3, 5)),
    ];
    for (name, model) in models {
        let model = match model {
            Ok(m) => m,
            Err(e) => return check("oracle-benchmarks", false, format!("{name}: {e}")),
        };
        match crate::benchmarks::oracle_gap(&model, model.default_quad_points()) {
            Ok(gap) => {
                detail.push_str(&format!("{name} {gap:.2e} "));
                worst = worst.max(gap);
            }
            Err(e) => return check("oracle-benchmarks", false, format!("{name}: {e}")),
        }
    }
    check("oracle-benchmarks", worst <= 1e-9, detail)
}

/// Random nondegenerate NURBS patch with a free-floating material model.
pub fn fuzz_model(rng: &mut ChaCha8Rng) -> Result<ShellModel> {
    let p = rng.gen_range(2..=3usize);
    let spans = rng.gen_range(1..=2usize);
    let kv_u = KnotVector::open_uniform(0.0, 1.0, spans, p)?;
    let kv_v = KnotVector::open_uniform(0.0, 1.0, spans, p)?;
    let (nu, nv) = (kv_u.num_basis(), kv_v.num_basis());
    let mut points = Vec::with_capacity(nu * nv);
    let mut weights = Vec::with_capacity(nu * nv);
    let jitter = 0.25 / (nu.max(nv)) as f64;
    for j in 0..nv {
        for i in 0..nu {
            let base = Vector3::new(
                i as f64 / (nu - 1).max(1) as f64,
                j as f64 / (nv - 1).max(1) as f64,
                0.0,
            );
            let bump = Vector3::new(
                rng.gen_range(-jitter..jitter),
                rng.gen_range(-jitter..jitter),
                rng.gen_range(-2.0 * jitter..2.0 * jitter),
            );
            points.push(base + bump);
            weights.push(rng.gen_range(0.75..1.35));
        }
    }
    let patch = NurbsPatch::new(kv_u, kv_v, points, weights)?;
    let space = patch.space().clone();
    let nu_mat = [0.0, 0.3, 0.45][rng.gen_range(0..3)];
    Ok(ShellModel {
        geometry: Geometry::Nurbs(patch),
        space,
        material: Material::new(10f64.powf(rng.gen_range(0.0..4.0)), nu_mat, rng.gen_range(0.01..0.2))?,
        bcs: vec![(Edge::RMin, BcKind::Free)],
        point_pins: vec![],
        load: Load::None,
        point_loads: vec![],
    })
}

fn oracle_fuzz(seed: u64, trials: usize) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut worst_trial = 0usize;
    for trial in 0..trials {
        let model = match fuzz_model(&mut rng) {
            Ok(m) => m,
            Err(e) => return check("oracle-fuzz", false, format!("trial {trial}: {e}")),
        };
        match crate::benchmarks::oracle_gap(&model, model.default_quad_points()) {
            Ok(gap) => {
                if gap > worst {
                    worst = gap;
                    worst_trial = trial;
                }
            }
            Err(e) => return check("oracle-fuzz", false, format!("trial {trial}: {e}")),
        }
    }
    check(
        "oracle-fuzz",
        worst <= 1e-9,
        format!("{trials} trials, worst {worst:.2e} (trial {worst_trial}, seed {seed})"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_clean() {
        let opts = VerifyOptions {
            fuzz_trials: 10,
            ..VerifyOptions::default()
        };
        let results = run_all(&opts);
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
        assert_eq!(results.len(), 10);
    }

    #[test]
    fn injected_sign_flip_is_detected() {
        let opts = VerifyOptions {
            fuzz_trials: 1,
            inject: Some(Fault::WeingartenSignFlip),
            ..VerifyOptions::default()
        };
        let results = run_all(&opts);
        let curv = results.iter().find(|r| r.name == "curvature-oracles").unwrap();
        assert!(!curv.passed, "sign flip must fail the curvature check");
    }
}
