//! Command-line front end: argument parsing, configuration and dispatch.

// `!(x > 0.0)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod format;
pub mod mesh;

use config::{FileConfig, Kind};

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or configuration.
    Usage(String),
    /// A computation that was expected to succeed did not.
    Numeric(bour_core::Error),
    Io(std::io::Error),
}

impl From<bour_core::Error> for Failure {
    fn from(e: bour_core::Error) -> Self {
        Failure::Numeric(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "bour",
    version,
    about = "Helicoidal surfaces, their Bour images and fundamental forms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// CSV of E, F, G, L, M, N, X, Y, Z, K, H and Phi over the grid.
    Forms(SurfaceArgs),
    /// CSV of K, H and the principal curvatures over the grid.
    Curvature(SurfaceArgs),
    /// CSV of unit normals, and those of the aligned Bour image for helicoidal kinds.
    Gauss(SurfaceArgs),
    /// CSV of the Bour image profile: radius k, twist Theta, height z and arc length.
    Bour(SurfaceArgs),
    /// CSV of the profile whose Bour image is a catenoid with neck radius b.
    Samegauss(SurfaceArgs),
    /// Third Laplace-Beltrami operator applied to the immersion.
    Delta3(Delta3Args),
    /// Runs every applicable check and exits 1 if a gating check fails.
    Verify(VerifyArgs),
    /// Wavefront OBJ mesh of the surface.
    Mesh(SurfaceArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct SurfaceArgs {
    /// JSON configuration file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    #[arg(long)]
    pub zeta: Option<String>,
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long)]
    pub radius: Option<String>,
    #[arg(long)]
    pub height: Option<String>,
    #[arg(long)]
    pub twist: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub pitch: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub u_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub u_max: Option<f64>,
    #[arg(long)]
    pub nu: Option<usize>,
    #[arg(long)]
    pub nv: Option<usize>,
    /// Anchor of the integrals defining the Bour image.
    #[arg(long, allow_negative_numbers = true)]
    pub u0: Option<f64>,
    /// Tolerance of the adaptive quadrature.
    #[arg(long)]
    pub tol_quad: Option<f64>,
    /// Base step of finite differences.
    #[arg(long)]
    pub fd_step: Option<f64>,
    /// Output file (stdout if absent).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Delta3Args {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Largest residual norm accepted as III-minimal.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Print a JSON report instead of CSV.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Print a JSON report instead of text.
    #[arg(long)]
    pub json: bool,
}

impl SurfaceArgs {
    /// Loads the config file, if any, and applies the flags on top.
    pub fn merged(&self) -> Result<FileConfig, Failure> {
        let mut c = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        fn set<T: Clone>(slot: &mut Option<T>, flag: &Option<T>) {
            if let Some(v) = flag {
                *slot = Some(v.clone());
            }
        }
        set(&mut c.kind, &self.kind);
        set(&mut c.zeta, &self.zeta);
        set(&mut c.phi, &self.phi);
        set(&mut c.radius, &self.radius);
        set(&mut c.height, &self.height);
        set(&mut c.twist, &self.twist);
        set(&mut c.pitch, &self.pitch);
        set(&mut c.b, &self.b);
        set(&mut c.nu, &self.nu);
        set(&mut c.nv, &self.nv);
        set(&mut c.u0, &self.u0);
        set(&mut c.tol_quad, &self.tol_quad);
        set(&mut c.fd_step, &self.fd_step);
        set(&mut c.output, &self.output);
        if self.u_min.is_some() || self.u_max.is_some() {
            let [lo, hi] = c.domain.unwrap_or([f64::NAN, f64::NAN]);
            let lo = self.u_min.unwrap_or(lo);
            let hi = self.u_max.unwrap_or(hi);
            if lo.is_nan() || hi.is_nan() {
                return Err(Failure::Usage("both ends of the domain must be given".into()));
            }
            c.domain = Some([lo, hi]);
        }
        Ok(c)
    }
}

/// Parses `argv` and runs the command, writing results to `out` (unless an
/// output file is configured) and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match commands::dispatch(&cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numeric(e)) => {
            let _ = writeln!(err, "numerical failure: {e}");
            EXIT_NUMERIC
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
