//! JSON run configuration and its flag overrides.

use std::path::{Path, PathBuf};

use bour_core::bour::same_gauss_profile;
use bour_core::surfaces::expr_map;
use bour_core::{Domain, HelicoidalSurface, ProfileCurve, RotationalSurface, Surface};
use clap::ValueEnum;
use serde::Deserialize;

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Helicoidal,
    Rotational,
    Samegauss,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Helicoidal => "helicoidal",
            Kind::Rotational => "rotational",
            Kind::Samegauss => "samegauss",
        }
    }
}

/// Per-check tolerances used by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub isometry: f64,
    pub curvature: f64,
    pub closed_curvature: f64,
    pub minimality: f64,
    pub rotational_mean: f64,
    pub gauss_map: f64,
    pub brioschi: f64,
    pub shape_operator: f64,
    pub delta3: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            isometry: 1e-7,
            curvature: 1e-6,
            closed_curvature: 1e-9,
            minimality: 1e-9,
            rotational_mean: 1e-7,
            gauss_map: 1e-6,
            brioschi: 1e-4,
            shape_operator: 1e-9,
            delta3: 1e-6,
        }
    }
}

/// Configuration file as written by the user. Every field is optional so
/// that flags can fill in or replace any of them.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub kind: Option<Kind>,
    pub zeta: Option<String>,
    pub phi: Option<String>,
    pub radius: Option<String>,
    pub height: Option<String>,
    pub twist: Option<String>,
    pub pitch: Option<f64>,
    pub b: Option<f64>,
    pub domain: Option<[f64; 2]>,
    pub v_range: Option<[f64; 2]>,
    pub nu: Option<usize>,
    pub nv: Option<usize>,
    pub u0: Option<f64>,
    pub tol_quad: Option<f64>,
    pub fd_step: Option<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceSpec {
    Helicoidal {
        zeta: String,
        phi: String,
        pitch: f64,
    },
    Rotational {
        radius: String,
        height: String,
        twist: Option<String>,
    },
    SameGauss {
        zeta: String,
        pitch: f64,
        b: f64,
    },
}

pub const DEFAULT_GRID: usize = 20;
pub const DEFAULT_TOL_QUAD: f64 = 1e-10;

/// Validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub surface: SurfaceSpec,
    pub domain: Domain,
    pub v_range: Option<(f64, f64)>,
    pub nu: usize,
    pub nv: usize,
    pub u0: f64,
    pub tol_quad: f64,
    pub fd_step: Option<f64>,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
}

fn require(field: Option<String>, name: &str, kind: Kind) -> Result<String, Failure> {
    field.ok_or_else(|| Failure::Usage(format!("`{name}` is required for kind {}", kind.name())))
}

fn positive(value: f64, name: &str) -> Result<f64, Failure> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Failure::Usage(format!(
            "`{name}` must be positive and finite, got {value}"
        )))
    }
}

impl Config {
    pub fn resolve(file: FileConfig) -> Result<Self, Failure> {
        let kind = file
            .kind
            .ok_or_else(|| Failure::Usage("surface `kind` is not set".into()))?;
        let surface = match kind {
            Kind::Helicoidal => {
                let pitch = file
                    .pitch
                    .ok_or_else(|| Failure::Usage("`pitch` is required for kind helicoidal".into()))?;
                if pitch == 0.0 || !pitch.is_finite() {
                    return Err(Failure::Usage(format!(
                        "helicoidal pitch must be finite and nonzero, got {pitch} (use kind rotational for a = 0)"
                    )));
                }
                SurfaceSpec::Helicoidal {
                    zeta: require(file.zeta, "zeta", kind)?,
                    phi: require(file.phi, "phi", kind)?,
                    pitch,
                }
            }
            Kind::Rotational => SurfaceSpec::Rotational {
                radius: require(file.radius, "radius", kind)?,
                height: require(file.height, "height", kind)?,
                twist: file.twist,
            },
            Kind::Samegauss => SurfaceSpec::SameGauss {
                zeta: require(file.zeta, "zeta", kind)?,
                pitch: positive(file.pitch.unwrap_or(f64::NAN), "pitch")?,
                b: positive(file.b.unwrap_or(f64::NAN), "b")?,
            },
        };
        let [lo, hi] = file
            .domain
            .ok_or_else(|| Failure::Usage("`domain` is not set".into()))?;
        let domain = Domain::new(lo, hi).map_err(|e| Failure::Usage(e.to_string()))?;
        let nu = file.nu.unwrap_or(DEFAULT_GRID);
        let nv = file.nv.unwrap_or(DEFAULT_GRID);
        if nu < 2 || nv < 2 {
            return Err(Failure::Usage(format!("grid counts must be at least 2, got {nu}x{nv}")));
        }
        let u0 = file.u0.unwrap_or_else(|| domain.midpoint());
        if !domain.contains(u0) {
            return Err(Failure::Usage(format!("anchor u0 = {u0} lies outside [{lo}, {hi}]")));
        }
        let v_range = match file.v_range {
            Some([a, b]) if a.is_finite() && b.is_finite() && a < b => Some((a, b)),
            Some([a, b]) => return Err(Failure::Usage(format!("invalid v_range [{a}, {b}]"))),
            None => None,
        };
        let tol_quad = positive(file.tol_quad.unwrap_or(DEFAULT_TOL_QUAD), "tol_quad")?;
        let fd_step = file.fd_step.map(|h| positive(h, "fd_step")).transpose()?;
        let t = file.tolerances;
        for (name, value) in [
            ("isometry", t.isometry),
            ("curvature", t.curvature),
            ("closed_curvature", t.closed_curvature),
            ("minimality", t.minimality),
            ("rotational_mean", t.rotational_mean),
            ("gauss_map", t.gauss_map),
            ("brioschi", t.brioschi),
            ("shape_operator", t.shape_operator),
            ("delta3", t.delta3),
        ] {
            if !(value >= 0.0) {
                return Err(Failure::Usage(format!(
                    "tolerance `{name}` must be non-negative, got {value}"
                )));
            }
        }
        Ok(Self {
            surface,
            domain,
            v_range,
            nu,
            nv,
            u0,
            tol_quad,
            fd_step,
            tolerances: t,
            output: file.output,
        })
    }

    pub fn kind(&self) -> Kind {
        match self.surface {
            SurfaceSpec::Helicoidal { .. } => Kind::Helicoidal,
            SurfaceSpec::Rotational { .. } => Kind::Rotational,
            SurfaceSpec::SameGauss { .. } => Kind::Samegauss,
        }
    }

    /// Constructs the configured surface. Bad expressions and profiles that
    /// leave their domain are configuration errors.
    pub fn build(&self) -> Result<Model, Failure> {
        let usage = |e: bour_core::Error| Failure::Usage(e.to_string());
        Ok(match &self.surface {
            SurfaceSpec::Helicoidal { zeta, phi, pitch } => {
                let profile = ProfileCurve::from_exprs(zeta, phi, self.domain).map_err(usage)?;
                Model::Helicoidal(HelicoidalSurface::new(profile, *pitch).map_err(usage)?)
            }
            SurfaceSpec::Rotational { radius, height, twist } => Model::Rotational(
                RotationalSurface::from_exprs(radius, height, twist.as_deref(), self.domain).map_err(usage)?,
            ),
            SurfaceSpec::SameGauss { zeta, pitch, b } => {
                let zeta = expr_map(zeta).map_err(usage)?;
                let profile =
                    same_gauss_profile(zeta, *pitch, *b, self.domain, self.u0, self.tol_quad).map_err(usage)?;
                Model::Helicoidal(HelicoidalSurface::new(profile, *pitch).map_err(usage)?)
            }
        })
    }
}

pub enum Model {
    Helicoidal(HelicoidalSurface),
    Rotational(RotationalSurface),
}

impl Model {
    pub fn surface(&self) -> &dyn Surface {
        match self {
            Model::Helicoidal(h) => h,
            Model::Rotational(r) => r,
        }
    }

    pub fn helicoidal(&self) -> Option<&HelicoidalSurface> {
        match self {
            Model::Helicoidal(h) => Some(h),
            Model::Rotational(_) => None,
        }
    }
}
