//! Subcommand implementations.

use std::f64::consts::TAU;
use std::io::Write;

use bour_core::bour::{bour_image, gauss_aligned_image, NaturalChart};
use bour_core::forms::{gaussian_curvature_closed, phi_functional, FormSet};
use bour_core::lb3::iii_minimality_scan;
use bour_core::verify::{
    check_brioschi, check_closed_curvature, check_curvature_correspondence, check_gauss_map_coincidence,
    check_isometry, check_minimality_equivalence, check_rotational_mean_curvature, check_shape_operator,
    shape_operator_eigen, CheckReport,
};
use bour_core::{ParamGrid, Surface};
use serde::Serialize;

use crate::config::{Config, Kind, Model};
use crate::format::{num, row};
use crate::mesh::export_obj;
use crate::{Command, Failure, SurfaceArgs, EXIT_CHECK_FAILED, EXIT_OK};

pub fn dispatch(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let load = |a: &SurfaceArgs| Config::resolve(a.merged()?);
    match cmd {
        Command::Forms(a) => forms(&load(a)?, out),
        Command::Curvature(a) => curvature(&load(a)?, out),
        Command::Gauss(a) => gauss(&load(a)?, out, err),
        Command::Bour(a) => bour(&load(a)?, out),
        Command::Samegauss(a) => samegauss(&load(a)?, out),
        Command::Delta3(a) => {
            let cfg = load(&a.surface)?;
            let tol = a.tol.unwrap_or(cfg.tolerances.delta3);
            if !(tol >= 0.0) {
                return Err(Failure::Usage(format!("--tol must be non-negative, got {tol}")));
            }
            delta3(&cfg, tol, a.json, out, err)
        }
        Command::Verify(a) => verify(&load(&a.surface)?, a.json, out),
        Command::Mesh(a) => mesh(&load(a)?, out, err),
    }
}

/// Evaluation grid: `v` over `[0, 2π)` unless a range is configured, in
/// which case both ends are included.
pub fn grid(cfg: &Config) -> Result<ParamGrid, Failure> {
    let g = match cfg.v_range {
        Some((lo, hi)) => ParamGrid::with_v_range(cfg.domain, cfg.nu, cfg.nv, lo, hi, true),
        None => ParamGrid::new(cfg.domain, cfg.nu, cfg.nv),
    };
    g.map_err(|e| Failure::Usage(e.to_string()))
}

fn emit(cfg: &Config, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            Failure::Io(std::io::Error::new(
                e.kind(),
                format!("cannot write {}: {e}", path.display()),
            ))
        }),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn push_line(text: &mut String, line: &str) {
    text.push_str(line);
    text.push('\n');
}

fn forms(cfg: &Config, out: &mut dyn Write) -> Result<i32, Failure> {
    let model = cfg.build()?;
    let s = model.surface();
    let h = model.helicoidal();
    let mut text = String::new();
    let header = "u,v,E,F,G,L,M,N,X,Y,Z,K,H";
    push_line(
        &mut text,
        &if h.is_some() {
            format!("{header},Phi")
        } else {
            header.to_string()
        },
    );
    for (u, v) in grid(cfg)?.points() {
        let f = FormSet::of(&s.jet(u, v)?)?;
        let mut cells = vec![
            u, v, f.first.e, f.first.f, f.first.g, f.second.l, f.second.m, f.second.n, f.third.x, f.third.y, f.third.z,
            f.gaussian, f.mean,
        ];
        if let Some(h) = h {
            cells.push(phi_functional(&h.profile, h.pitch(), u)?);
        }
        push_line(&mut text, &row(&cells));
    }
    emit(cfg, &text, out)?;
    Ok(EXIT_OK)
}

fn curvature(cfg: &Config, out: &mut dyn Write) -> Result<i32, Failure> {
    let model = cfg.build()?;
    let s = model.surface();
    let h = model.helicoidal();
    let mut text = String::new();
    let header = "u,v,K,H,k1,k2";
    push_line(
        &mut text,
        &if h.is_some() {
            format!("{header},K_closed")
        } else {
            header.to_string()
        },
    );
    for (u, v) in grid(cfg)?.points() {
        let j = s.jet(u, v)?;
        let f = FormSet::of(&j)?;
        let (k1, k2) = shape_operator_eigen(&j)?;
        let mut cells = vec![u, v, f.gaussian, f.mean, k1, k2];
        if let Some(h) = h {
            cells.push(gaussian_curvature_closed(&h.profile, h.pitch(), u)?);
        }
        push_line(&mut text, &row(&cells));
    }
    emit(cfg, &text, out)?;
    Ok(EXIT_OK)
}

fn gauss(cfg: &Config, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let model = cfg.build()?;
    let s = model.surface();
    let image = match model.helicoidal() {
        Some(h) => Some(gauss_aligned_image(h, cfg.u0, cfg.tol_quad)?),
        None => None,
    };
    let mut text = String::new();
    let mut header = String::from("u,v,nx,ny,nz");
    if image.is_some() {
        header.push_str(",nx_R,ny_R,nz_R,deviation");
    }
    push_line(&mut text, &header);
    let mut sign = None;
    let mut worst: f64 = 0.0;
    for (u, v) in grid(cfg)?.points() {
        let n = FormSet::of(&s.jet(u, v)?)?.normal;
        let mut cells = vec![u, v, n.x, n.y, n.z];
        if let Some(img) = &image {
            let r = FormSet::of(&img.surface.jet(u, v)?)?.normal;
            let sg = *sign.get_or_insert(if n.dot(r) < 0.0 { -1.0 } else { 1.0 });
            let dev = n.max_abs_diff(r.scale(sg));
            worst = worst.max(dev);
            cells.extend([r.x, r.y, r.z, dev]);
        }
        push_line(&mut text, &row(&cells));
    }
    emit(cfg, &text, out)?;
    if image.is_some() {
        writeln!(err, "max normal deviation from the aligned Bour image: {}", num(worst))?;
    }
    Ok(EXIT_OK)
}

fn bour(cfg: &Config, out: &mut dyn Write) -> Result<i32, Failure> {
    let model = cfg.build()?;
    let h = model
        .helicoidal()
        .ok_or_else(|| Failure::Usage("bour needs a helicoidal or samegauss surface".into()))?;
    let image = bour_image(h, cfg.u0, cfg.tol_quad)?;
    let chart = NaturalChart::new(h, cfg.u0, cfg.tol_quad)?;
    let mut text = String::new();
    push_line(&mut text, "u,k,Theta,z,u_bar");
    for &u in &grid(cfg)?.us {
        let k = image.radius().jet(u)?.value;
        let theta = image.twist().jet(u)?.value;
        let z = image.height().jet(u)?.value;
        let (u_bar, _) = chart.eval(u, 0.0)?;
        push_line(&mut text, &row(&[u, k, theta, z, u_bar]));
    }
    emit(cfg, &text, out)?;
    Ok(EXIT_OK)
}

fn samegauss(cfg: &Config, out: &mut dyn Write) -> Result<i32, Failure> {
    if cfg.kind() != Kind::Samegauss {
        return Err(Failure::Usage(
            "samegauss needs kind samegauss (zeta, pitch and b)".into(),
        ));
    }
    let model = cfg.build()?;
    let h = model.helicoidal().expect("samegauss builds a helicoidal surface");
    let mut text = String::new();
    push_line(&mut text, "u,zeta,phi,phi_u,Phi");
    for &u in &grid(cfg)?.us {
        let (z, p) = h.profile.jets(u)?;
        let phi = phi_functional(&h.profile, h.pitch(), u)?;
        push_line(&mut text, &row(&[u, z.value, p.value, p.d1, phi]));
    }
    emit(cfg, &text, out)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct Delta3Point {
    u: f64,
    v: f64,
    residual: Option<[f64; 3]>,
}

#[derive(Serialize)]
struct Delta3Json<'a> {
    command: &'a str,
    kind: &'a str,
    nu: usize,
    nv: usize,
    tolerance: f64,
    max_norm: f64,
    iii_minimal: bool,
    flagged: usize,
    points: Vec<Delta3Point>,
}

fn delta3(cfg: &Config, tol: f64, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let model = cfg.build()?;
    let g = grid(cfg)?;
    let report = iii_minimality_scan(model.surface(), &g, tol, cfg.fd_step);
    if report.flagged == report.points.len() {
        let (u, v) = g.points().next().unwrap_or_default();
        bour_core::lb3::delta3_immersion(model.surface(), u, v, cfg.fd_step)?;
    }
    let text = if json {
        let doc = Delta3Json {
            command: "delta3",
            kind: cfg.kind().name(),
            nu: cfg.nu,
            nv: cfg.nv,
            tolerance: tol,
            max_norm: report.max_norm,
            iii_minimal: report.iii_minimal,
            flagged: report.flagged,
            points: report
                .points
                .iter()
                .map(|p| Delta3Point {
                    u: p.u,
                    v: p.v,
                    residual: p.residual.map(|r| r.to_array()),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
    } else {
        let mut text = String::new();
        push_line(&mut text, "u,v,dx,dy,dz,norm");
        for p in &report.points {
            match p.residual {
                Some(r) => push_line(&mut text, &row(&[p.u, p.v, r.x, r.y, r.z, r.norm()])),
                None => push_line(&mut text, &format!("{},{},,,,", num(p.u), num(p.v))),
            }
        }
        text
    };
    emit(cfg, &text, out)?;
    writeln!(
        err,
        "max |Delta^III x| = {} over {} points ({} parabolic or undefined), tolerance {}: {}",
        num(report.max_norm),
        report.points.len(),
        report.flagged,
        num(tol),
        if report.iii_minimal {
            "III-minimal"
        } else {
            "not III-minimal"
        }
    )?;
    Ok(if report.iii_minimal { EXIT_OK } else { EXIT_CHECK_FAILED })
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    /// Whether a failure of this check fails the run.
    pub gate: bool,
    pub passed: bool,
    pub points_checked: usize,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub worst_point: [f64; 2],
}

impl CheckEntry {
    fn new(report: CheckReport, gate: bool) -> Self {
        Self {
            name: report.name,
            gate,
            passed: report.passed,
            points_checked: report.points_checked,
            max_abs_error: report.max_abs_error,
            tolerance: report.tolerance,
            worst_point: [report.worst_point.0, report.worst_point.1],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub kind: &'static str,
    pub domain: [f64; 2],
    pub nu: usize,
    pub nv: usize,
    pub passed: bool,
    pub checks: Vec<CheckEntry>,
}

/// All checks applicable to the configured surface, in a fixed order.
pub fn verify_report(cfg: &Config) -> Result<VerifyReport, Failure> {
    let model = cfg.build()?;
    let g = grid(cfg)?;
    let t = cfg.tolerances;
    let mut checks = Vec::new();
    if let Model::Helicoidal(h) = &model {
        let image = bour_image(h, cfg.u0, cfg.tol_quad)?;
        let aligned = gauss_aligned_image(h, cfg.u0, cfg.tol_quad)?;
        checks.push(CheckEntry::new(check_isometry(&image, &g, t.isometry)?, true));
        checks.push(CheckEntry::new(
            check_curvature_correspondence(&image, &g, t.curvature)?,
            true,
        ));
        checks.push(CheckEntry::new(
            check_closed_curvature(h, &g, t.closed_curvature)?,
            true,
        ));
        checks.push(CheckEntry::new(
            check_minimality_equivalence(h, &g, t.minimality)?,
            true,
        ));
        checks.push(CheckEntry::new(
            check_rotational_mean_curvature(&image, &g, t.rotational_mean)?,
            true,
        ));
        // The normals of a helicoidal surface and its Bour image only coincide
        // for the same-Gauss-map family, so elsewhere this is informational.
        let same_gauss = cfg.kind() == Kind::Samegauss;
        checks.push(CheckEntry::new(
            check_gauss_map_coincidence(h, &aligned.surface, &g, t.gauss_map)?,
            same_gauss,
        ));
    }
    let s = model.surface();
    checks.push(CheckEntry::new(check_brioschi(s, &g, t.brioschi, cfg.fd_step)?, true));
    checks.push(CheckEntry::new(check_shape_operator(s, &g, t.shape_operator)?, true));
    Ok(VerifyReport {
        command: "verify",
        kind: cfg.kind().name(),
        domain: [cfg.domain.lo, cfg.domain.hi],
        nu: cfg.nu,
        nv: cfg.nv,
        passed: checks.iter().all(|c| c.passed || !c.gate),
        checks,
    })
}

fn verify(cfg: &Config, json: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let report = verify_report(cfg)?;
    let text = if json {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        let mut text = format!(
            "surface {} on [{}, {}], grid {}x{}\n",
            report.kind,
            num(report.domain[0]),
            num(report.domain[1]),
            report.nu,
            report.nv
        );
        for c in &report.checks {
            let status = match (c.passed, c.gate) {
                (true, _) => "PASS",
                (false, true) => "FAIL",
                (false, false) => "info",
            };
            text.push_str(&format!(
                "{status} {:<28} max_abs_error={:<24} tolerance={}\n",
                c.name,
                num(c.max_abs_error),
                num(c.tolerance)
            ));
        }
        text.push_str(if report.passed {
            "all gates passed\n"
        } else {
            "gate failure\n"
        });
        text
    };
    emit(cfg, &text, out)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn mesh(cfg: &Config, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let model = cfg.build()?;
    let g = match cfg.v_range {
        Some(_) => grid(cfg)?,
        None => ParamGrid::with_v_range(cfg.domain, cfg.nu, cfg.nv, 0.0, TAU, true)
            .map_err(|e| Failure::Usage(e.to_string()))?,
    };
    let obj = export_obj(model.surface(), &g)?;
    for (u, v) in &obj.degenerate {
        writeln!(
            err,
            "warning: degenerate normal at u = {}, v = {}; wrote a zero vector",
            num(*u),
            num(*v)
        )?;
    }
    emit(cfg, &obj.text, out)?;
    Ok(EXIT_OK)
}
