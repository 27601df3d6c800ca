//! Wavefront OBJ export of a surface sampled on a parameter grid.

use std::fmt::Write as _;

use bour_core::forms::gauss_map;
use bour_core::{ParamGrid, Surface, Vec3};

use crate::format::sig9;

#[derive(Debug, Clone, PartialEq)]
pub struct ObjMesh {
    pub text: String,
    pub vertices: usize,
    pub faces: usize,
    /// Grid points where the normal is undefined and a zero vector was written.
    pub degenerate: Vec<(f64, f64)>,
}

fn push_vec(out: &mut String, tag: &str, p: Vec3) {
    let _ = writeln!(out, "{tag} {} {} {}", sig9(p.x), sig9(p.y), sig9(p.z));
}

/// Vertices in row-major grid order (`u` outer), one normal per vertex and
/// two triangles per grid cell wound along `x_u × x_v`.
pub fn export_obj(s: &dyn Surface, grid: &ParamGrid) -> bour_core::Result<ObjMesh> {
    let nu = grid.us.len();
    let nv = grid.vs.len();
    let mut positions = Vec::with_capacity(grid.len());
    let mut normals = Vec::with_capacity(grid.len());
    let mut degenerate = Vec::new();
    for (u, v) in grid.points() {
        let j = s.jet(u, v)?;
        positions.push(j.x);
        normals.push(gauss_map(&j).unwrap_or_else(|_| {
            degenerate.push((u, v));
            Vec3::ZERO
        }));
    }

    let mut text = String::new();
    let _ = writeln!(text, "# {nu} x {nv} parameter grid");
    for &p in &positions {
        push_vec(&mut text, "v", p);
    }
    for &n in &normals {
        push_vec(&mut text, "vn", n);
    }
    let idx = |i: usize, j: usize| i * nv + j + 1;
    let mut faces = 0;
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            let _ = writeln!(text, "f {a}//{a} {b}//{b} {c}//{c}");
            let _ = writeln!(text, "f {a}//{a} {c}//{c} {d}//{d}");
            faces += 2;
        }
    }
    Ok(ObjMesh {
        text,
        vertices: positions.len(),
        faces,
        degenerate,
    })
}
