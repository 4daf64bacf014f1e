//! Field sampling on a uniform parametric grid, for external plotting.

use super::study::fmt_float;
use crate::assembly::ShellModel;
use crate::error::Result;
use crate::geometry::GeometryMap;
use crate::shell::{stress_resultants, DisplacementField};
use crate::tdc::FrameJets;

/// Plain-text table `r s x y z ux uy uz m1 m2 q1 q2 q3` on a
/// (grid+1) x (grid+1) uniform parametric grid.
pub fn field_samples(
    model: &ShellModel,
    displacement: &DisplacementField,
    grid: usize,
) -> Result<String> {
    let (r0, r1) = model.space.knot_u().domain();
    let (s0, s1) = model.space.knot_v().domain();
    let mut out = String::from("# r s x y z ux uy uz m1 m2 q1 q2 q3\n");
    for j in 0..=grid {
        for i in 0..=grid {
            let r = r0 + (r1 - r0) * i as f64 / grid as f64;
            let s = s0 + (s1 - s0) * j as f64 / grid as f64;
            let elem = model.space.element_containing(r, s)?;
            let frame = FrameJets::build(model.geometry.jets(r, s, 3)?, (r, s))?;
            let basis = model.space.eval_basis(elem, (r, s), 3)?;
            let u = displacement.jets(&basis);
            let res = stress_resultants(&u, &frame, &model.material)?;
            let x = [frame.x[0].val(), frame.x[1].val(), frame.x[2].val()];
            let uv = u.value();
            let cols = [
                r,
                s,
                x[0],
                x[1],
                x[2],
                uv.x,
                uv.y,
                uv.z,
                res.principal_moments[0],
                res.principal_moments[1],
                res.shear.x,
                res.shear.y,
                res.shear.z,
            ];
            let line: Vec<String> = cols.iter().map(|&v| fmt_float(v)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
    Ok(out)
}
