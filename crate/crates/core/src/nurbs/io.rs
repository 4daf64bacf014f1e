//! Plain-text patch files.
//!
//! Grammar (`#` starts a comment line, blank lines ignored):
//!
//! ```text
//! degrees <pu> <pv>
//! knots_u <count>
//! <value> ...            # count values, whitespace separated
//! knots_v <count>
//! <value> ...
//! grid <nu> <nv>
//! <x> <y> <z> <w>        # nu*nv lines, u index fastest
//! ```
//!
//! Floats are written with enough digits to round-trip exactly, so
//! write-then-read reproduces the patch bit for bit.

use nalgebra::Vector3;

use super::knots::KnotVector;
use super::patch::NurbsPatch;
use crate::error::{Error, Result};

pub fn write_patch(patch: &NurbsPatch) -> String {
    let mut out = String::new();
    let (pu, pv) = patch.space().degrees();
    out.push_str(&format!("degrees {pu} {pv}\n"));
    for (name, kv) in [("knots_u", patch.space().knot_u()), ("knots_v", patch.space().knot_v())] {
        out.push_str(&format!("{name} {}\n", kv.knots().len()));
        let vals: Vec<String> = kv.knots().iter().map(|k| format!("{k:?}")).collect();
        out.push_str(&vals.join(" "));
        out.push('\n');
    }
    out.push_str(&format!("grid {} {}\n", patch.nu(), patch.nv()));
    for (pt, w) in patch.points().iter().zip(patch.weights()) {
        out.push_str(&format!("{:?} {:?} {:?} {:?}\n", pt.x, pt.y, pt.z, w));
    }
    out
}

pub fn read_patch(text: &str) -> Result<NurbsPatch> {
    let mut tokens: Vec<(usize, &str)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        for tok in body.split_whitespace() {
            tokens.push((lineno + 1, tok));
        }
    }
    let mut pos = 0usize;
    let mut expect = |what: &str| -> Result<(usize, &str)> {
        let t = tokens.get(pos).copied().ok_or_else(|| Error::PatchParse {
            line: tokens.last().map_or(0, |t| t.0),
            msg: format!("unexpected end of file, expected {what}"),
        })?;
        pos += 1;
        Ok(t)
    };

    fn keyword(t: (usize, &str), kw: &str) -> Result<()> {
        if t.1 != kw {
            return Err(Error::PatchParse {
                line: t.0,
                msg: format!("expected `{kw}`, found `{}`", t.1),
            });
        }
        Ok(())
    }
    fn int(t: (usize, &str)) -> Result<usize> {
        t.1.parse().map_err(|_| Error::PatchParse {
            line: t.0,
            msg: format!("expected integer, found `{}`", t.1),
        })
    }
    fn float(t: (usize, &str)) -> Result<f64> {
        t.1.parse().map_err(|_| Error::PatchParse {
            line: t.0,
            msg: format!("expected number, found `{}`", t.1),
        })
    }

    keyword(expect("degrees")?, "degrees")?;
    let pu = int(expect("pu")?)?;
    let pv = int(expect("pv")?)?;

    let mut knots = Vec::new();
    for name in ["knots_u", "knots_v"] {
        keyword(expect(name)?, name)?;
        let count = int(expect("knot count")?)?;
        let mut kv = Vec::with_capacity(count);
        for _ in 0..count {
            kv.push(float(expect("knot value")?)?);
        }
        knots.push(kv);
    }

    keyword(expect("grid")?, "grid")?;
    let nu = int(expect("nu")?)?;
    let nv = int(expect("nv")?)?;
    let mut points = Vec::with_capacity(nu * nv);
    let mut weights = Vec::with_capacity(nu * nv);
    for _ in 0..nu * nv {
        let x = float(expect("x")?)?;
        let y = float(expect("y")?)?;
        let z = float(expect("z")?)?;
        let w = float(expect("w")?)?;
        points.push(Vector3::new(x, y, z));
        weights.push(w);
    }
    if pos != tokens.len() {
        return Err(Error::PatchParse {
            line: tokens[pos].0,
            msg: "trailing content after control grid".into(),
        });
    }
    let knots_v = knots.pop().unwrap();
    let knots_u = knots.pop().unwrap();
    NurbsPatch::new(
        KnotVector::open(knots_u, pu)?,
        KnotVector::open(knots_v, pv)?,
        points,
        weights,
    )
}
