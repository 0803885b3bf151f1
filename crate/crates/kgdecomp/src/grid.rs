//! Uniform radial mesh on the half-line.

use crate::error::{Error, Result};

/// Uniform grid on `[r_min, r_max]` with `r_min > 0`. The singular Coulomb
/// and screened-Coulomb terms rule out a node at the origin.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    r_min: f64,
    r_max: f64,
    h: f64,
    nodes: Vec<f64>,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, n_nodes: usize) -> Result<Self> {
        if !(r_min.is_finite() && r_max.is_finite()) || r_min <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "grid bounds must be finite with r_min > 0, got [{r_min}, {r_max}]"
            )));
        }
        if r_max <= r_min {
            return Err(Error::InvalidParameter(format!(
                "r_max = {r_max} must exceed r_min = {r_min}"
            )));
        }
        if n_nodes < 3 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 3 nodes, got {n_nodes}"
            )));
        }
        let h = (r_max - r_min) / (n_nodes - 1) as f64;
        let nodes = (0..n_nodes).map(|i| r_min + i as f64 * h).collect();
        Ok(Self { r_min, r_max, h, nodes })
    }

    /// Grid from a target spacing; the node count is rounded so the mesh
    /// stays uniform and ends at `r_max`.
    pub fn from_step(r_min: f64, r_max: f64, h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidParameter(format!("spacing must be positive, got {h}")));
        }
        let n = ((r_max - r_min) / h).round() as usize + 1;
        Self::new(r_min, r_max, n.max(3))
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Same span with halved spacing.
    pub fn refined(&self) -> Self {
        Self::new(self.r_min, self.r_max, 2 * self.nodes.len() - 1)
            .expect("refining a valid grid cannot fail")
    }

    /// Cumulative trapezoid integral of samples taken on this grid.
    /// `out[0] = 0`, `out[i] = ∫_{r_min}^{r_i}`.
    pub fn cumtrapz(&self, samples: &[f64]) -> Vec<f64> {
        debug_assert_eq!(samples.len(), self.nodes.len());
        let mut out = Vec::with_capacity(samples.len());
        let mut acc = 0.0;
        out.push(0.0);
        for i in 1..samples.len() {
            acc += 0.5 * self.h * (samples[i - 1] + samples[i]);
            out.push(acc);
        }
        out
    }

    /// Total trapezoid integral over the grid.
    pub fn trapz(&self, samples: &[f64]) -> f64 {
        debug_assert_eq!(samples.len(), self.nodes.len());
        let interior: f64 = samples[1..samples.len() - 1].iter().sum();
        self.h * (interior + 0.5 * (samples[0] + samples[samples.len() - 1]))
    }
}
