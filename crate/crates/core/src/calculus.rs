//! Adaptive quadrature, memoized indefinite integrals and Richardson
//! central differences.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_DEPTH: u32 = 60;
pub const MAX_SUBDIVISIONS: usize = 4096;

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15), kept at full published precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

fn kronrod15<F>(f: &mut F, a: f64, b: f64, depth: u32) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sample = |x: f64| -> Result<f64> {
        let y = f(x)?;
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFinite { at: x })
        }
    };
    let fc = sample(center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = sample(center - dx)? + sample(center + dx)?;
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok(Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
        depth,
    })
}

/// Integrates a fallible integrand over `[a, b]` (either orientation).
///
/// Converges when the summed Kronrod-Gauss difference drops below
/// `max(tol, tol * |value|)`.
pub fn try_integrate<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::invalid(format!(
            "quadrature tolerance must be positive, got {tol}"
        )));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::invalid("integration bounds must be finite"));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions: 0,
        });
    }
    if b < a {
        let r = try_integrate(f, b, a, tol)?;
        return Ok(QuadratureResult { value: -r.value, ..r });
    }

    let mut segments = vec![kronrod15(&mut f, a, b, 0)?];
    loop {
        // Summed in interval order so the result does not depend on split history.
        segments.sort_by(|x, y| x.a.total_cmp(&y.a));
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let subdivisions = segments.len() - 1;
        if error <= tol.max(tol * value.abs()) {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                subdivisions,
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one segment");
        let seg = segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        if subdivisions >= MAX_SUBDIVISIONS || seg.depth >= MAX_DEPTH || mid <= seg.a || mid >= seg.b {
            return Err(Error::NoConvergence {
                a,
                b,
                estimate: error,
                subdivisions,
            });
        }
        let left = kronrod15(&mut f, seg.a, mid, seg.depth + 1)?;
        let right = kronrod15(&mut f, mid, seg.b, seg.depth + 1)?;
        segments[worst] = left;
        segments.push(right);
    }
}

pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    try_integrate(|x| Ok(f(x)), a, b, tol)
}

/// Indefinite integral `F(u) = ∫_{u0}^{u} f`, memoized on a fixed lattice
/// `u0 + k * cell`.
///
/// Lattice values are built cell by cell outward from `u0`, so a value never
/// depends on the order in which points were requested. The cache is behind
/// a mutex; one instance may be shared across threads.
pub struct Cumulative<F> {
    f: F,
    u0: f64,
    tol: f64,
    cell: f64,
    nodes: Mutex<HashMap<i64, f64>>,
}

pub const DEFAULT_CELL: f64 = 0.25;

impl<F> Cumulative<F>
where
    F: Fn(f64) -> Result<f64>,
{
    pub fn new(f: F, u0: f64, tol: f64) -> Self {
        Self::with_cell(f, u0, tol, DEFAULT_CELL)
    }

    pub fn with_cell(f: F, u0: f64, tol: f64, cell: f64) -> Self {
        assert!(cell > 0.0 && cell.is_finite(), "lattice cell must be positive");
        let mut nodes = HashMap::new();
        nodes.insert(0, 0.0);
        Self {
            f,
            u0,
            tol,
            cell,
            nodes: Mutex::new(nodes),
        }
    }

    pub fn anchor(&self) -> f64 {
        self.u0
    }

    pub fn integrand(&self, u: f64) -> Result<f64> {
        (self.f)(u)
    }

    fn node(&self, k: i64) -> f64 {
        self.u0 + k as f64 * self.cell
    }

    fn node_value(&self, k: i64) -> Result<f64> {
        let mut nodes = self.nodes.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(&v) = nodes.get(&k) {
            return Ok(v);
        }
        let step = k.signum();
        let mut j = k;
        while !nodes.contains_key(&j) {
            j -= step;
        }
        let mut acc = nodes[&j];
        while j != k {
            let next = j + step;
            acc += try_integrate(&self.f, self.node(j), self.node(next), self.tol / 8.0)?.value;
            nodes.insert(next, acc);
            j = next;
        }
        Ok(acc)
    }

    pub fn eval(&self, u: f64) -> Result<f64> {
        if !u.is_finite() {
            return Err(Error::NonFinite { at: u });
        }
        if u == self.u0 {
            return Ok(0.0);
        }
        let k = ((u - self.u0) / self.cell).trunc() as i64;
        let base = self.node_value(k)?;
        let start = self.node(k);
        Ok(base + try_integrate(&self.f, start, u, self.tol)?.value)
    }
}

/// Base step used when the caller does not supply one.
pub fn default_step(x: f64) -> f64 {
    1e-4 * x.abs().max(1.0)
}

/// Central difference with two levels of Richardson extrapolation
/// (steps h0, h0/2, h0/4).
pub fn try_central_derivative<G>(mut g: G, x: f64, h0: f64) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    if !(h0 > 0.0) || !h0.is_finite() {
        return Err(Error::invalid(format!(
            "finite-difference step must be positive, got {h0}"
        )));
    }
    let mut diff = |h: f64| -> Result<f64> {
        let (lo, hi) = (g(x - h)?, g(x + h)?);
        if !lo.is_finite() {
            return Err(Error::NonFinite { at: x - h });
        }
        if !hi.is_finite() {
            return Err(Error::NonFinite { at: x + h });
        }
        Ok((hi - lo) / (2.0 * h))
    };
    let d0 = diff(h0)?;
    let d1 = diff(h0 / 2.0)?;
    let d2 = diff(h0 / 4.0)?;
    let r1 = (4.0 * d1 - d0) / 3.0;
    let r2 = (4.0 * d2 - d1) / 3.0;
    Ok((16.0 * r2 - r1) / 15.0)
}

pub fn central_derivative<G>(g: G, x: f64, h0: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    try_central_derivative(|t| Ok(g(t)), x, h0)
}
