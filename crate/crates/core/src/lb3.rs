//! Laplace-Beltrami operator of the third fundamental form.
//!
//! ```text
//! Δ^III f = −(√det I / det II) [ ∂_u((Z f_u − Y f_v) / (√det I det II))
//!                              − ∂_v((Y f_u − X f_v) / (√det I det II)) ]
//! ```
//!
//! The two inner quotients are exact (they only need first derivatives of
//! `f` and second-order surface jets); the outer derivatives are Richardson
//! central differences.

use crate::calculus::try_central_derivative;
use crate::error::{Error, Result};
use crate::forms::{first_form, second_form, third_form};
use crate::grid::ParamGrid;
use crate::surfaces::Surface;
use crate::vector::Vec3;

/// Relative threshold for `|det II|` below which a point counts as parabolic.
pub const PARABOLIC_RTOL: f64 = 1e-10;

/// Default outer finite-difference step at parameter value `x`.
pub fn default_step(x: f64) -> f64 {
    1e-3 * x.abs().max(1.0)
}

/// Gradient `(f_u, f_v)` of a scalar field on the parameter domain.
pub trait ScalarField {
    fn gradient(&self, u: f64, v: f64) -> Result<(f64, f64)>;
}

pub struct FieldFn<F>(pub F);

impl<F> ScalarField for FieldFn<F>
where
    F: Fn(f64, f64) -> Result<(f64, f64)>,
{
    fn gradient(&self, u: f64, v: f64) -> Result<(f64, f64)> {
        (self.0)(u, v)
    }
}

/// The `index`-th coordinate function of the immersion itself.
pub struct Coordinate<'a> {
    pub surface: &'a dyn Surface,
    pub index: usize,
}

impl ScalarField for Coordinate<'_> {
    fn gradient(&self, u: f64, v: f64) -> Result<(f64, f64)> {
        let j = self.surface.jet(u, v)?;
        Ok((j.x_u[self.index], j.x_v[self.index]))
    }
}

/// Metric weights at a point: `X, Y, Z` and `√det I · det II`.
struct Weights {
    x: f64,
    y: f64,
    z: f64,
    sqrt_det1: f64,
    det2: f64,
}

fn weights(s: &dyn Surface, u: f64, v: f64) -> Result<Weights> {
    let j = s.jet(u, v)?;
    let first = first_form(&j);
    let second = second_form(&j)?;
    let third = third_form(&first, &second)?;
    let det2 = second.det();
    let scale = second.l.abs() + second.m.abs() + second.n.abs() + f64::MIN_POSITIVE;
    if !(det2.abs() >= PARABOLIC_RTOL * scale * scale) {
        return Err(Error::Parabolic { det: det2 });
    }
    Ok(Weights {
        x: third.x,
        y: third.y,
        z: third.z,
        sqrt_det1: first.det().sqrt(),
        det2,
    })
}

/// The two inner fields `(Z f_u − Y f_v, Y f_u − X f_v) / (√det I det II)` at a point.
pub fn inner_fields(s: &dyn Surface, f: &dyn ScalarField, u: f64, v: f64) -> Result<(f64, f64)> {
    let w = weights(s, u, v)?;
    let (fu, fv) = f.gradient(u, v)?;
    let denom = w.sqrt_det1 * w.det2;
    let a = (w.z * fu - w.y * fv) / denom;
    let b = (w.y * fu - w.x * fv) / denom;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::NonFinite { at: u });
    }
    Ok((a, b))
}

/// `(∂_u A, ∂_v B)` for the inner fields `A`, `B`; Δ^III vanishes where they agree.
pub fn cancellation_terms(
    s: &dyn Surface,
    f: &dyn ScalarField,
    u: f64,
    v: f64,
    hu: f64,
    hv: f64,
) -> Result<(f64, f64)> {
    let a_u = try_central_derivative(|t| inner_fields(s, f, t, v).map(|p| p.0), u, hu)?;
    let b_v = try_central_derivative(|t| inner_fields(s, f, u, t).map(|p| p.1), v, hv)?;
    Ok((a_u, b_v))
}

/// Δ^III f at `(u, v)` with outer steps `hu`, `hv`.
pub fn delta3_scalar_steps(s: &dyn Surface, f: &dyn ScalarField, u: f64, v: f64, hu: f64, hv: f64) -> Result<f64> {
    let w = weights(s, u, v)?;
    let (a_u, b_v) = cancellation_terms(s, f, u, v, hu, hv)?;
    Ok(-(w.sqrt_det1 / w.det2) * (a_u - b_v))
}

/// Δ^III f at `(u, v)`; `h` is the base step in both directions, or the default.
pub fn delta3_scalar(s: &dyn Surface, f: &dyn ScalarField, u: f64, v: f64, h: Option<f64>) -> Result<f64> {
    let (hu, hv) = steps(u, v, h);
    delta3_scalar_steps(s, f, u, v, hu, hv)
}

fn steps(u: f64, v: f64, h: Option<f64>) -> (f64, f64) {
    match h {
        Some(h) => (h, h),
        None => (default_step(u), default_step(v)),
    }
}

/// Δ^III applied to the three coordinate functions of the immersion.
pub fn delta3_immersion(s: &dyn Surface, u: f64, v: f64, h: Option<f64>) -> Result<Vec3> {
    let (hu, hv) = steps(u, v, h);
    let mut out = [0.0; 3];
    for (index, slot) in out.iter_mut().enumerate() {
        *slot = delta3_scalar_steps(s, &Coordinate { surface: s, index }, u, v, hu, hv)?;
    }
    Ok(out.into())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lb3Point {
    pub u: f64,
    pub v: f64,
    /// `None` at parabolic (or otherwise unevaluable) points.
    pub residual: Option<Vec3>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lb3Report {
    pub points: Vec<Lb3Point>,
    pub max_norm: f64,
    pub tolerance: f64,
    pub iii_minimal: bool,
    pub flagged: usize,
}

/// Evaluates Δ^III x over a grid. Points where it is undefined are flagged
/// rather than aborting the scan.
pub fn iii_minimality_scan(s: &dyn Surface, grid: &ParamGrid, tol: f64, h: Option<f64>) -> Lb3Report {
    let points: Vec<Lb3Point> = grid
        .points()
        .map(|(u, v)| Lb3Point {
            u,
            v,
            residual: delta3_immersion(s, u, v, h).ok(),
        })
        .collect();
    let max_norm = points
        .iter()
        .filter_map(|p| p.residual.map(Vec3::norm))
        .fold(0.0, f64::max);
    let flagged = points.iter().filter(|p| p.residual.is_none()).count();
    Lb3Report {
        max_norm,
        tolerance: tol,
        iii_minimal: max_norm <= tol,
        flagged,
        points,
    }
}
