//! Independent oracles and grid checkers for the theorem-level identities.

use crate::bour::BourImage;
use crate::calculus::try_central_derivative;
use crate::error::{Error, Result};
use crate::forms::{
    first_form, gaussian_curvature_closed, helicoidal_det_first, mean_curvature_rotational, phi_functional, FirstForm,
    FormSet,
};
use crate::grid::ParamGrid;
use crate::surfaces::{HelicoidalSurface, Surface, SurfaceJet};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub points_checked: usize,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub worst_point: (f64, f64),
}

/// Running maximum of an error measure over grid points.
#[derive(Debug, Clone)]
pub struct Accumulator {
    name: String,
    tolerance: f64,
    max: f64,
    worst: (f64, f64),
    count: usize,
}

impl Accumulator {
    pub fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            tolerance,
            max: 0.0,
            worst: (f64::NAN, f64::NAN),
            count: 0,
        }
    }

    pub fn observe(&mut self, u: f64, v: f64, error: f64) {
        let error = if error.is_nan() { f64::INFINITY } else { error.abs() };
        if self.count == 0 || error > self.max {
            self.max = error;
            self.worst = (u, v);
        }
        self.count += 1;
    }

    pub fn finish(self) -> CheckReport {
        CheckReport {
            passed: self.count > 0 && self.max <= self.tolerance,
            name: self.name,
            points_checked: self.count,
            max_abs_error: self.max,
            tolerance: self.tolerance,
            worst_point: self.worst,
        }
    }
}

/// `(E, F, G)` of the source and of its Bour image at identical parameters.
pub fn check_isometry(image: &BourImage, grid: &ParamGrid, tol: f64) -> Result<CheckReport> {
    let mut acc = Accumulator::new("isometry", tol);
    for (u, v) in grid.points() {
        let fh = first_form(&image.source.jet(u, v)?);
        let fr = first_form(&image.surface.jet(u, v)?);
        acc.observe(u, v, fh.max_abs_diff(&fr));
    }
    Ok(acc.finish())
}

/// Gaussian curvature of the source and of its Bour image, each from its own jets.
pub fn check_curvature_correspondence(image: &BourImage, grid: &ParamGrid, tol: f64) -> Result<CheckReport> {
    let mut acc = Accumulator::new("curvature_correspondence", tol);
    for (u, v) in grid.points() {
        let kh = FormSet::of(&image.source.jet(u, v)?)?.gaussian;
        let kr = FormSet::of(&image.surface.jet(u, v)?)?.gaussian;
        acc.observe(u, v, kh - kr);
    }
    Ok(acc.finish())
}

/// Closed-form profile curvature against the jet-based value on the helicoidal surface.
pub fn check_closed_curvature(h: &HelicoidalSurface, grid: &ParamGrid, tol: f64) -> Result<CheckReport> {
    let mut acc = Accumulator::new("closed_form_curvature", tol);
    for (u, v) in grid.points() {
        let k = FormSet::of(&h.jet(u, v)?)?.gaussian;
        acc.observe(u, v, k - gaussian_curvature_closed(&h.profile, h.pitch(), u)?);
    }
    Ok(acc.finish())
}

/// Unit normals of two surfaces at identical parameters, up to one global sign
/// fixed at the first grid point.
pub fn check_gauss_map_coincidence(
    h: &dyn Surface,
    r: &dyn Surface,
    grid: &ParamGrid,
    tol: f64,
) -> Result<CheckReport> {
    let mut acc = Accumulator::new("gauss_map_coincidence", tol);
    let mut sign = None;
    for (u, v) in grid.points() {
        let nh = FormSet::of(&h.jet(u, v)?)?.normal;
        let nr = FormSet::of(&r.jet(u, v)?)?.normal;
        let s = *sign.get_or_insert(if nh.dot(nr) < 0.0 { -1.0 } else { 1.0 });
        acc.observe(u, v, nh.max_abs_diff(nr.scale(s)));
    }
    Ok(acc.finish())
}

/// `|2 H det I^{3/2}|` against `|Φ(u)|`, relative to their magnitude.
///
/// Both sides vanish on minimal surfaces, where H is pure cancellation
/// between the principal curvatures, so the magnitude is floored at
/// `det I^{3/2} √(k1² + k2²)`.
pub fn check_minimality_equivalence(h: &HelicoidalSurface, grid: &ParamGrid, rtol: f64) -> Result<CheckReport> {
    let mut acc = Accumulator::new("minimality_equivalence", rtol);
    for (u, v) in grid.points() {
        let forms = FormSet::of(&h.jet(u, v)?)?;
        let det = helicoidal_det_first(&h.profile, h.pitch(), u)?;
        let lhs = (2.0 * forms.mean * det.powf(1.5)).abs();
        let rhs = phi_functional(&h.profile, h.pitch(), u)?.abs();
        let curvature = (4.0 * forms.mean * forms.mean - 2.0 * forms.gaussian).max(0.0).sqrt();
        let scale = lhs.max(rhs).max(det.powf(1.5) * curvature);
        acc.observe(u, v, if scale == 0.0 { 0.0 } else { (lhs - rhs) / scale });
    }
    Ok(acc.finish())
}

/// Mean curvature of the Bour image from its jets against the profile formula.
pub fn check_rotational_mean_curvature(image: &BourImage, grid: &ParamGrid, tol: f64) -> Result<CheckReport> {
    let mut acc = Accumulator::new("rotational_mean_curvature", tol);
    let h = &image.source;
    for (u, v) in grid.points() {
        let jet = FormSet::of(&image.surface.jet(u, v)?)?.mean;
        acc.observe(u, v, jet - mean_curvature_rotational(&h.profile, h.pitch(), u)?);
    }
    Ok(acc.finish())
}

/// Brioschi's intrinsic curvature against the extrinsic `det II / det I`.
pub fn check_brioschi(s: &dyn Surface, grid: &ParamGrid, tol: f64, h: Option<f64>) -> Result<CheckReport> {
    let mut acc = Accumulator::new("brioschi_curvature", tol);
    let metric = |u: f64, v: f64| Ok(first_form(&s.jet(u, v)?));
    for (u, v) in grid.points() {
        let step = h.unwrap_or_else(|| crate::lb3::default_step(u.abs().max(v.abs())));
        let intrinsic = brioschi_curvature(&metric, u, v, step)?;
        acc.observe(u, v, intrinsic - FormSet::of(&s.jet(u, v)?)?.gaussian);
    }
    Ok(acc.finish())
}

/// Principal curvatures reproduce `K` and `H` from the form-based route.
pub fn check_shape_operator(s: &dyn Surface, grid: &ParamGrid, tol: f64) -> Result<CheckReport> {
    let mut acc = Accumulator::new("shape_operator", tol);
    for (u, v) in grid.points() {
        let j = s.jet(u, v)?;
        let (k1, k2) = shape_operator_eigen(&j)?;
        let forms = FormSet::of(&j)?;
        let err = (k1 * k2 - forms.gaussian)
            .abs()
            .max((0.5 * (k1 + k2) - forms.mean).abs());
        acc.observe(u, v, err);
    }
    Ok(acc.finish())
}

/// Gaussian curvature from the first fundamental form alone (Brioschi's
/// formula), with all metric derivatives taken by finite differences.
pub fn brioschi_curvature<M>(metric: &M, u: f64, v: f64, h: f64) -> Result<f64>
where
    M: Fn(f64, f64) -> Result<FirstForm>,
{
    let at = metric(u, v)?;
    let det = at.det();
    if !(det > 0.0) {
        return Err(Error::Degenerate(format!("det I = {det:e}")));
    }
    let comp = |k: usize| move |f: FirstForm| [f.e, f.f, f.g][k];
    let d_u = |k: usize, v: f64, t: f64| -> Result<f64> { try_central_derivative(|s| metric(s, v).map(comp(k)), t, h) };
    let d_v = |k: usize, u: f64, t: f64| -> Result<f64> { try_central_derivative(|s| metric(u, s).map(comp(k)), t, h) };
    let (e_u, f_u, g_u) = (d_u(0, v, u)?, d_u(1, v, u)?, d_u(2, v, u)?);
    let (e_v, f_v, g_v) = (d_v(0, u, v)?, d_v(1, u, v)?, d_v(2, u, v)?);
    let e_vv = try_central_derivative(|s| d_v(0, u, s), v, h)?;
    let g_uu = try_central_derivative(|s| d_u(2, v, s), u, h)?;
    let f_uv = try_central_derivative(|s| d_v(1, s, v), u, h)?;

    let FirstForm { e, f, g } = at;
    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let a = [
        [-0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v],
        [f_v - 0.5 * g_u, e, f],
        [0.5 * g_v, f, g],
    ];
    let b = [[0.0, 0.5 * e_v, 0.5 * g_u], [0.5 * e_v, e, f], [0.5 * g_u, f, g]];
    Ok((det3(a) - det3(b)) / (det * det))
}

/// Eigenvalues `k1 ≥ k2` of the shape operator `I⁻¹ II`, computed from the
/// jet with its own normal.
pub fn shape_operator_eigen(j: &SurfaceJet) -> Result<(f64, f64)> {
    let cross = j.x_u.cross(j.x_v);
    let n = cross
        .normalized()
        .ok_or_else(|| Error::Degenerate("vanishing normal".into()))?;
    let (e, f, g) = (j.x_u.dot(j.x_u), j.x_u.dot(j.x_v), j.x_v.dot(j.x_v));
    let (l, m, nn) = (j.x_uu.dot(n), j.x_uv.dot(n), j.x_vv.dot(n));
    let det = e * g - f * f;
    if !(det > 0.0) {
        return Err(Error::Degenerate(format!("det I = {det:e}")));
    }
    let w00 = (g * l - f * m) / det;
    let w01 = (g * m - f * nn) / det;
    let w10 = (e * m - f * l) / det;
    let w11 = (e * nn - f * m) / det;
    let half_trace = 0.5 * (w00 + w11);
    let half_gap = 0.5 * (w00 - w11);
    let disc = (half_gap * half_gap + w01 * w10).max(0.0).sqrt();
    Ok((half_trace + disc, half_trace - disc))
}
