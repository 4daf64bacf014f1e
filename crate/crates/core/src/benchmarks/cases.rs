//! The benchmark problems: flat shell with manufactured solution,
//! Scordelis-Lo roof, pinched cylinder (one-eighth model), and the
//! flower-shaped shell.

use nalgebra::{Matrix3, Vector3};
use std::f64::consts::PI;

use crate::assembly::{BcKind, Edge, Load, PointLoad, PointPin, ShellModel};
use crate::error::{Error, Result};
use crate::geometry::{AnalyticSurface, Geometry, GeometryMap};
use crate::jet::Jet;
use crate::nurbs::{KnotVector, NurbsPatch, SplineSpace};
use crate::shell::{strong_form, FieldJets, Material};
use crate::tdc::FrameJets;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseId {
    FlatShell,
    ScordelisLo,
    PinchedCylinder,
    Flower,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [
        CaseId::FlatShell,
        CaseId::ScordelisLo,
        CaseId::PinchedCylinder,
        CaseId::Flower,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CaseId::FlatShell => "flat_shell",
            CaseId::ScordelisLo => "scordelis_lo",
            CaseId::PinchedCylinder => "pinched_cylinder",
            CaseId::Flower => "flower",
        }
    }

    pub fn parse(s: &str) -> Option<CaseId> {
        CaseId::ALL.iter().copied().find(|c| c.name() == s)
    }
}

/// Published or analytic reference quantities.
pub struct CaseReference {
    /// Max normal displacement of the flat shell, 1 / (4 pi^4).
    pub flat_un_max: f64,
    /// Scordelis-Lo max vertical displacement.
    pub scordelis_uz_max: f64,
    /// Pinched cylinder radial displacement under the load.
    pub pinched_u_load: f64,
    /// Flower stored elastic energy (overkill reference).
    pub flower_energy: f64,
}

pub const REFERENCE: CaseReference = CaseReference {
    flat_un_max: 1.0 / (4.0 * 97.40909103400243), // 4 pi^4
    scordelis_uz_max: 0.3024,
    pinched_u_load: 1.82488e-5,
    flower_energy: 1.7635958,
};

/// The flat-shell rotation: orthonormal columns (e1, e2, n) with the
/// benchmark normal n = (-1/4, -sqrt(3)/2, sqrt(3)/4).
pub fn flat_shell_rotation() -> Matrix3<f64> {
    let n = Vector3::new(-0.25, -3.0f64.sqrt() / 2.0, 3.0f64.sqrt() / 4.0);
    let e1 = Vector3::new(0.0, 0.0, 1.0).cross(&n).normalize();
    let e2 = n.cross(&e1);
    Matrix3::from_columns(&[e1, e2, n])
}

/// Exact solution of the flat-shell case in patch parameters:
/// tangential (1,1)/4 sin(pi r) sin(pi s) in the local plane axes plus
/// normal -sin(pi r) sin(pi s) / (4 pi^4).
pub struct FlatShellExact {
    pub rotation: Matrix3<f64>,
}

impl FlatShellExact {
    pub fn field_jets(&self, r: f64, s: f64, order: usize) -> FieldJets {
        let rj = Jet::variable(r, 0, order);
        let sj = Jet::variable(s, 1, order);
        let mode = rj.scale(PI).sin().mul(&sj.scale(PI).sin());
        let tangential = mode.scale(0.25);
        let normal = mode.scale(-1.0 / (4.0 * PI.powi(4)));
        let local = [tangential, tangential, normal];
        let mut global = [
            Jet::zero(order),
            Jet::zero(order),
            Jet::zero(order),
        ];
        for i in 0..3 {
            for (j, l) in local.iter().enumerate() {
                global[i].axpy(self.rotation[(i, j)], l);
            }
        }
        FieldJets::new(global)
    }
}

fn flat_plane_surface(rotation: Matrix3<f64>) -> AnalyticSurface {
    AnalyticSurface::new(move |r, s| {
        let mut out = [
            Jet::zero(r.order()),
            Jet::zero(r.order()),
            Jet::zero(r.order()),
        ];
        for i in 0..3 {
            out[i] = r.scale(rotation[(i, 0)]).add(&s.scale(rotation[(i, 1)]));
        }
        out
    })
}

fn flat_patch(rotation: Matrix3<f64>, p: usize, n: usize) -> Result<NurbsPatch> {
    let kv = KnotVector::open(vec![0.0, 0.0, 1.0, 1.0], 1)?;
    let corners: Vec<Vector3<f64>> = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
        .iter()
        .map(|&(a, b)| rotation.column(0) * a + rotation.column(1) * b)
        .collect();
    NurbsPatch::new(kv.clone(), kv, corners, vec![1.0; 4])?
        .elevated_to(p, p)?
        .refined_uniform(n, n)
}

/// Manufactured flat-shell load: f = -L(u_exact), evaluated through the
/// strong-form operator on the analytic plane.
fn flat_shell_load(rotation: Matrix3<f64>, material: Material) -> Load {
    let exact = FlatShellExact { rotation };
    let plane = flat_plane_surface(rotation);
    Load::Field(Box::new(move |r, s| {
        let frame = FrameJets::build(plane.jets(r, s, 4).unwrap(), (r, s)).unwrap();
        let field = exact.field_jets(r, s, 4);
        -strong_form(&field, &frame, &material).unwrap()
    }))
}

pub fn flat_shell_model(p: usize, n: usize, rotated: bool) -> Result<ShellModel> {
    let rotation = if rotated {
        flat_shell_rotation()
    } else {
        Matrix3::identity()
    };
    let material = Material::new(10000.0, 0.3, 0.01)?;
    let patch = flat_patch(rotation, p, n)?;
    let space = patch.space().clone();
    Ok(ShellModel {
        geometry: Geometry::Nurbs(patch),
        space,
        material,
        bcs: Edge::ALL
            .iter()
            .map(|&e| (e, BcKind::SimplySupported))
            .collect(),
        point_pins: vec![],
        load: flat_shell_load(rotation, material),
        point_loads: vec![],
    })
}

/// Rational quadratic arc of half-angle `alpha` in the x-z plane at
/// height y, traced from theta = -alpha to +alpha around the y axis;
/// theta measured from the z axis.
fn arc_points(radius: f64, alpha: f64, y: f64) -> ([Vector3<f64>; 3], [f64; 3]) {
    let (s, c) = alpha.sin_cos();
    (
        [
            Vector3::new(-radius * s, y, radius * c),
            Vector3::new(0.0, y, radius / c),
            Vector3::new(radius * s, y, radius * c),
        ],
        [1.0, c, 1.0],
    )
}

/// Cylindrical panel: u runs axially over [0, length], v along the arc.
/// The control net is ordered so the computed normal points toward the
/// axis, matching the curvature sign convention of the frame module.
fn cylinder_patch(
    radius: f64,
    length: f64,
    alpha: f64,
    theta_from_top: bool,
    p: usize,
    n: usize,
) -> Result<NurbsPatch> {
    let kv_u = KnotVector::open(vec![0.0, 0.0, 1.0, 1.0], 1)?;
    let kv_v = KnotVector::open(vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0], 2)?;
    let mut points = Vec::with_capacity(6);
    let mut weights = Vec::with_capacity(6);
    for j in 0..3 {
        for &y in &[0.0, length] {
            let (pts, w) = if theta_from_top {
                // quarter arc from the crown (theta = 0) to the side
                let theta = [0.0, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_2];
                let mid = radius / theta[1].cos();
                (
                    [
                        Vector3::new(radius * theta[0].sin(), y, radius * theta[0].cos()),
                        Vector3::new(mid * theta[1].sin(), y, mid * theta[1].cos()),
                        Vector3::new(radius * theta[2].sin(), y, radius * theta[2].cos()),
                    ],
                    [1.0, theta[1].cos(), 1.0],
                )
            } else {
                arc_points(radius, alpha, y)
            };
            points.push(pts[j]);
            weights.push(w[j]);
        }
    }
    NurbsPatch::new(kv_u, kv_v, points, weights)?
        .elevated_to(p, p)?
        .refined_uniform(n, n)
}

pub fn scordelis_lo_model(p: usize, n: usize) -> Result<ShellModel> {
    let material = Material::new(4.32e8, 0.0, 0.25)?;
    let patch = cylinder_patch(25.0, 50.0, 40.0f64.to_radians(), false, p, n)?;
    let space = patch.space().clone();
    Ok(ShellModel {
        geometry: Geometry::Nurbs(patch),
        space,
        material,
        bcs: vec![
            (Edge::RMin, BcKind::Diaphragm),
            (Edge::RMax, BcKind::Diaphragm),
            (Edge::SMin, BcKind::Free),
            (Edge::SMax, BcKind::Free),
        ],
        // the axial translation is load-free and unconstrained by the
        // diaphragms; pin it at midspan
        point_pins: vec![PointPin {
            r: 0.5,
            s: 0.5,
            component: 1,
        }],
        load: Load::constant(Vector3::new(0.0, 0.0, -90.0)),
        point_loads: vec![],
    })
}

pub fn pinched_cylinder_model(p: usize, n: usize) -> Result<ShellModel> {
    let material = Material::new(3e6, 0.3, 3.0)?;
    let patch = cylinder_patch(300.0, 300.0, std::f64::consts::FRAC_PI_4, true, p, n)?;
    let space = patch.space().clone();
    Ok(ShellModel {
        geometry: Geometry::Nurbs(patch),
        space,
        material,
        bcs: vec![
            (Edge::RMin, BcKind::Symmetry),
            (Edge::RMax, BcKind::Diaphragm),
            (Edge::SMin, BcKind::Symmetry),
            (Edge::SMax, BcKind::Symmetry),
        ],
        point_pins: vec![],
        load: Load::None,
        point_loads: vec![PointLoad {
            r: 0.0,
            s: 0.0,
            force: Vector3::new(0.0, 0.0, -0.25),
        }],
    })
}

pub fn flower_model(p: usize, n: usize) -> Result<ShellModel> {
    if n <= p {
        return Err(Error::InvalidKnots(format!(
            "flower case: closed direction needs more than p = {p} spans, got {n}"
        )));
    }
    let material = Material::new(1e5, 0.3, 0.1)?;
    let space = SplineSpace::new(
        KnotVector::periodic_uniform(-1.0, 1.0, n, p)?,
        KnotVector::open_uniform(-1.0, 1.0, n, p)?,
        None,
    )?;
    Ok(ShellModel {
        geometry: Geometry::Analytic(AnalyticSurface::flower()),
        space,
        material,
        bcs: vec![(Edge::SMin, BcKind::Clamped), (Edge::SMax, BcKind::Clamped)],
        point_pins: vec![],
        load: Load::constant(Vector3::new(1.0, 2.0, -10.0)),
        point_loads: vec![],
    })
}

pub fn build_model(case: CaseId, p: usize, n: usize) -> Result<ShellModel> {
    match case {
        CaseId::FlatShell => flat_shell_model(p, n, true),
        CaseId::ScordelisLo => scordelis_lo_model(p, n),
        CaseId::PinchedCylinder => pinched_cylinder_model(p, n),
        CaseId::Flower => flower_model(p, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_is_orthonormal_with_benchmark_normal() {
        let r = flat_shell_rotation();
        assert!((r * r.transpose() - Matrix3::identity()).norm() < 1e-14);
        assert!((r.determinant() - 1.0).abs() < 1e-14);
        let n = r.column(2);
        assert!((n - Vector3::new(-0.25, -3.0f64.sqrt() / 2.0, 3.0f64.sqrt() / 4.0)).norm() < 1e-15);
    }

    #[test]
    fn flat_model_material_constant() {
        let m = flat_shell_model(2, 2, true).unwrap();
        assert!((m.material.flexural_rigidity() - 9.157509157509158e-4).abs() < 1e-12);
    }

    /// The manufactured load's normal component must reduce to the
    /// closed form -D sin(pi r) sin(pi s).
    #[test]
    fn flat_load_normal_component_closed_form() {
        let model = flat_shell_model(3, 2, true).unwrap();
        let rot = flat_shell_rotation();
        let n = rot.column(2);
        let d = model.material.flexural_rigidity();
        for &(r, s) in &[(0.3, 0.4), (0.75, 0.1), (0.5, 0.5)] {
            let f = model.load.eval(r, s);
            let f_n = f.dot(&n);
            let expected = -d * (PI * r).sin() * (PI * s).sin();
            assert!(
                (f_n - expected).abs() <= 1e-10 * expected.abs().max(1e-12),
                "f_n = {f_n} vs {expected}"
            );
        }
    }

    /// Scordelis-Lo geometry: every sampled point lies on the cylinder.
    #[test]
    fn scordelis_geometry_is_exact_cylinder() {
        let model = scordelis_lo_model(4, 4).unwrap();
        for i in 0..=8 {
            for j in 0..=8 {
                let (r, s) = (i as f64 / 8.0, j as f64 / 8.0);
                let x = model.geometry.jets(r, s, 0).unwrap();
                let rad = (x[0].val().powi(2) + x[2].val().powi(2)).sqrt();
                assert!((rad - 25.0).abs() < 1e-12, "({r}, {s}): {rad}");
                assert!((-1e-9..=50.0 + 1e-9).contains(&x[1].val()));
            }
        }
        // curvature sign: kappa = {1/25, 0} per the frame convention
        let f = crate::tdc::frame_at(&model.geometry, 0.3, 0.6, 2).unwrap();
        assert!((f.kappa1 - 1.0 / 25.0).abs() < 1e-12);
        assert!(f.kappa2.abs() < 1e-12);
    }

    #[test]
    fn pinched_geometry_spans_quarter_arc() {
        let model = pinched_cylinder_model(3, 2).unwrap();
        let top = model.geometry.jets(0.0, 0.0, 0).unwrap();
        assert!((top[0].val()).abs() < 1e-12);
        assert!((top[2].val() - 300.0).abs() < 1e-12);
        let side = model.geometry.jets(0.0, 1.0, 0).unwrap();
        assert!((side[0].val() - 300.0).abs() < 1e-12);
        assert!(side[2].val().abs() < 1e-12);
        for i in 0..=6 {
            let x = model.geometry.jets(0.5, i as f64 / 6.0, 0).unwrap();
            let rad = (x[0].val().powi(2) + x[2].val().powi(2)).sqrt();
            assert!((rad - 300.0).abs() < 1e-11);
        }
    }

    #[test]
    fn flower_rejects_too_few_spans() {
        assert!(flower_model(6, 4).is_err());
        assert!(flower_model(4, 8).is_ok());
    }
}
