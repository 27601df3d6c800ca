use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::surfaces::Domain;

/// Tensor grid of parameter points. `u` runs over the domain inclusively,
/// `v` over `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamGrid {
    pub us: Vec<f64>,
    pub vs: Vec<f64>,
}

impl ParamGrid {
    pub fn new(domain: Domain, nu: usize, nv: usize) -> Result<Self> {
        Self::with_v_range(domain, nu, nv, 0.0, TAU, false)
    }

    /// Grid with an explicit `v` range; `closed` includes `v_hi` itself.
    pub fn with_v_range(domain: Domain, nu: usize, nv: usize, v_lo: f64, v_hi: f64, closed: bool) -> Result<Self> {
        if nu < 2 || nv < 2 {
            return Err(Error::invalid(format!("grid counts must be at least 2, got {nu}x{nv}")));
        }
        let us = domain.samples(nu).collect();
        let denom = if closed { nv - 1 } else { nv } as f64;
        let vs = (0..nv).map(|j| v_lo + (v_hi - v_lo) * j as f64 / denom).collect();
        Ok(Self { us, vs })
    }

    pub fn len(&self) -> usize {
        self.us.len() * self.vs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in row-major order: `u` outer, `v` inner.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.us.iter().flat_map(move |&u| self.vs.iter().map(move |&v| (u, v)))
    }
}
