//! First, second and third fundamental forms, the Gauss map and curvatures.
//!
//! The closed-form helpers at the bottom (`phi_functional`,
//! `gaussian_curvature_closed`, `mean_curvature_rotational`) work directly
//! from profile jets and serve as a second route to the jet-based values.

use crate::error::{Error, Result};
use crate::surfaces::{ProfileCurve, SurfaceJet};
use crate::vector::Vec3;

/// Relative threshold below which `EG - F²` counts as zero.
pub const DEGENERACY_RTOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl FirstForm {
    pub fn det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }

    pub fn is_degenerate(&self) -> bool {
        let scale = self.e + self.g;
        !(self.det() > DEGENERACY_RTOL * scale * scale)
    }

    fn nondegenerate(self) -> Result<Self> {
        if self.is_degenerate() {
            Err(Error::Degenerate(format!("det I = {:e}", self.det())))
        } else {
            Ok(self)
        }
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        (self.e - o.e).abs().max((self.f - o.f).abs()).max((self.g - o.g).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondForm {
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

impl SecondForm {
    pub fn det(&self) -> f64 {
        self.l * self.n - self.m * self.m
    }
}

/// Coefficients `X = EM² − 2FLM + GL²`, `Y = EMN − FLN + GLM − FM²`,
/// `Z = GM² − 2FNM + EN²`.
///
/// These are `det I` times the Gram matrix `⟨n_i, n_j⟩` of the Gauss map
/// differential; see [`ThirdForm::gram`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThirdForm {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ThirdForm {
    /// `⟨n_u, n_u⟩, ⟨n_u, n_v⟩, ⟨n_v, n_v⟩`.
    pub fn gram(&self, first: &FirstForm) -> ThirdForm {
        let d = first.det();
        ThirdForm {
            x: self.x / d,
            y: self.y / d,
            z: self.z / d,
        }
    }

    pub fn det(&self) -> f64 {
        self.x * self.z - self.y * self.y
    }
}

pub fn first_form(j: &SurfaceJet) -> FirstForm {
    FirstForm {
        e: j.x_u.dot(j.x_u),
        f: j.x_u.dot(j.x_v),
        g: j.x_v.dot(j.x_v),
    }
}

/// Unit normal `x_u × x_v / |x_u × x_v|`.
pub fn gauss_map(j: &SurfaceJet) -> Result<Vec3> {
    first_form(j).nondegenerate()?;
    j.x_u
        .cross(j.x_v)
        .normalized()
        .ok_or_else(|| Error::Degenerate("vanishing normal".into()))
}

pub fn second_form(j: &SurfaceJet) -> Result<SecondForm> {
    let n = gauss_map(j)?;
    Ok(SecondForm {
        l: j.x_uu.dot(n),
        m: j.x_uv.dot(n),
        n: j.x_vv.dot(n),
    })
}

pub fn third_form(first: &FirstForm, second: &SecondForm) -> Result<ThirdForm> {
    let FirstForm { e, f, g } = first.nondegenerate()?;
    let SecondForm { l, m, n } = *second;
    Ok(ThirdForm {
        x: e * m * m - 2.0 * f * l * m + g * l * l,
        y: e * m * n - f * l * n + g * l * m - f * m * m,
        z: g * m * m - 2.0 * f * n * m + e * n * n,
    })
}

pub fn gaussian_curvature(first: &FirstForm, second: &SecondForm) -> Result<f64> {
    Ok(second.det() / first.nondegenerate()?.det())
}

pub fn mean_curvature(first: &FirstForm, second: &SecondForm) -> Result<f64> {
    let FirstForm { e, f, g } = first.nondegenerate()?;
    let SecondForm { l, m, n } = *second;
    Ok((e * n - 2.0 * f * m + g * l) / (2.0 * first.det()))
}

/// Everything computable from one surface jet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormSet {
    pub normal: Vec3,
    pub first: FirstForm,
    pub second: SecondForm,
    pub third: ThirdForm,
    pub gaussian: f64,
    pub mean: f64,
}

impl FormSet {
    pub fn of(j: &SurfaceJet) -> Result<Self> {
        let first = first_form(j);
        let normal = gauss_map(j)?;
        let second = second_form(j)?;
        Ok(Self {
            normal,
            first,
            second,
            third: third_form(&first, &second)?,
            gaussian: gaussian_curvature(&first, &second)?,
            mean: mean_curvature(&first, &second)?,
        })
    }
}

/// `det I = (ζ² + a²) ζ′² + ζ² φ′²` of a helicoidal surface.
pub fn helicoidal_det_first(p: &ProfileCurve, a: f64, u: f64) -> Result<f64> {
    let (z, ph) = p.jets(u)?;
    Ok((z.value * z.value + a * a) * z.d1 * z.d1 + z.value * z.value * ph.d1 * ph.d1)
}

/// Gaussian curvature of the helicoidal surface from profile jets alone:
/// `(ζ³ζ′φ′φ″ − ζ³φ′²ζ″ − a²ζ′⁴) / ((ζ² + a²)ζ′² + ζ²φ′²)²`.
pub fn gaussian_curvature_closed(p: &ProfileCurve, a: f64, u: f64) -> Result<f64> {
    let (z, ph) = p.jets(u)?;
    let (zv, z1, z2) = (z.value, z.d1, z.d2);
    let (p1, p2) = (ph.d1, ph.d2);
    let z3 = zv * zv * zv;
    let num = z3 * z1 * p1 * p2 - z3 * p1 * p1 * z2 - a * a * z1.powi(4);
    let det = (zv * zv + a * a) * z1 * z1 + zv * zv * p1 * p1;
    if !(det > 0.0) {
        return Err(Error::Degenerate(format!("det I = {det:e} at u = {u}")));
    }
    Ok(num / (det * det))
}

/// `Φ(u) = (ζ²ζ′² − ζ³ζ″ − a²ζζ″ + 2a²ζ′²)φ′ + ζ²φ′³ + (ζ³ζ′ + a²ζζ′)φ″`.
///
/// The helicoidal surface has `H = Φ / (2 det I^{3/2})`; it is minimal exactly where Φ vanishes.
pub fn phi_functional(p: &ProfileCurve, a: f64, u: f64) -> Result<f64> {
    let (z, ph) = p.jets(u)?;
    let (zv, z1, z2) = (z.value, z.d1, z.d2);
    let (p1, p2) = (ph.d1, ph.d2);
    let a2 = a * a;
    let zz = zv * zv;
    Ok((zz * z1 * z1 - zz * zv * z2 - a2 * zv * z2 + 2.0 * a2 * z1 * z1) * p1
        + zz * p1 * p1 * p1
        + (zz * zv * z1 + a2 * zv * z1) * p2)
}

/// Mean curvature of the Bour image of the helicoidal surface, from profile jets:
/// `ζ²φ′Φ / (2 √(ζ²+a²) √((aζ′)² + (ζφ′)²) det I^{3/2})`.
///
/// Sign follows the `x_u × x_v` orientation of the image.
pub fn mean_curvature_rotational(p: &ProfileCurve, a: f64, u: f64) -> Result<f64> {
    let (z, ph) = p.jets(u)?;
    let (zv, z1, p1) = (z.value, z.d1, ph.d1);
    let w = ((a * z1).powi(2) + (zv * p1).powi(2)).sqrt();
    if !(w > 0.0) {
        return Err(Error::Degenerate(format!(
            "Bour image is singular at u = {u}: (aζ′)² + (ζφ′)² = 0"
        )));
    }
    let det = helicoidal_det_first(p, a, u)?;
    let phi = phi_functional(p, a, u)?;
    Ok(zv * zv * p1 * phi / (2.0 * (zv * zv + a * a).sqrt() * w * det.powf(1.5)))
}
