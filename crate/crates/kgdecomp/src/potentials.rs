//! Scalar/vector coupling pairs and the two effective potential strengths
//! they generate: the non-relativistic combination 2(mS + EV) and the
//! relativistic combination S² − V².

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::RadialGrid;

/// Rest mass in natural units (ħ = c = 1).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PhysParams {
    pub m: f64,
}

impl PhysParams {
    pub fn new(m: f64) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidParameter(format!("rest mass must be positive, got {m}")));
        }
        Ok(Self { m })
    }
}

/// Screened-Coulomb pair S(r) = −s0/(e^{αr}−1), V(r) = −v0/(e^{αr}−1).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HulthenPair {
    pub s0: f64,
    pub v0: f64,
    pub alpha: f64,
}

impl HulthenPair {
    pub fn new(s0: f64, v0: f64, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "screening parameter must be positive, got {alpha}"
            )));
        }
        if !(s0.is_finite() && v0.is_finite()) {
            return Err(Error::InvalidParameter("coupling strengths must be finite".into()));
        }
        Ok(Self { s0, v0, alpha })
    }

    /// 1/(e^{αr} − 1), evaluated through `exp_m1` so small αr does not
    /// lose digits to cancellation.
    pub fn screening(&self, r: f64) -> f64 {
        1.0 / (self.alpha * r).exp_m1()
    }
}

/// Power-series pair S(r) = s0/r + s1·r + s2·r², V(r) likewise.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct PowerSeriesPair {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub v0: f64,
    pub v1: f64,
    pub v2: f64,
}

impl PowerSeriesPair {
    pub fn new(s0: f64, s1: f64, s2: f64, v0: f64, v1: f64, v2: f64) -> Result<Self> {
        for (name, c) in [("s0", s0), ("s1", s1), ("s2", s2), ("v0", v0), ("v1", v1), ("v2", v2)] {
            if !c.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite, got {c}")));
            }
        }
        Ok(Self { s0, s1, s2, v0, v1, v2 })
    }

    pub fn scalar_only(s0: f64, s1: f64, s2: f64) -> Self {
        Self { s0, s1, s2, v0: 0.0, v1: 0.0, v2: 0.0 }
    }

    pub fn scalar(&self, r: f64) -> f64 {
        self.s0 / r + self.s1 * r + self.s2 * r * r
    }

    pub fn vector(&self, r: f64) -> f64 {
        self.v0 / r + self.v1 * r + self.v2 * r * r
    }

    pub fn vector_is_zero(&self) -> bool {
        self.v0 == 0.0 && self.v1 == 0.0 && self.v2 == 0.0
    }

    /// V = S coefficientwise.
    pub fn is_equal_coupling(&self) -> bool {
        self.v0 == self.s0 && self.v1 == self.s1 && self.v2 == self.s2
    }

    /// V = −S coefficientwise.
    pub fn is_opposite_coupling(&self) -> bool {
        self.v0 == -self.s0 && self.v1 == -self.s1 && self.v2 == -self.s2
    }

    pub fn is_zero(&self) -> bool {
        self.s0 == 0.0
            && self.s1 == 0.0
            && self.s2 == 0.0
            && self.v0 == 0.0
            && self.v1 == 0.0
            && self.v2 == 0.0
    }
}

/// A coupling specification: one of the two closed-form families, or raw
/// samples on a grid (linear interpolation between nodes).
#[derive(Debug, Clone)]
pub enum PotentialSpec {
    Hulthen(HulthenPair),
    PowerSeries(PowerSeriesPair),
    Sampled { grid: RadialGrid, s: Vec<f64>, v: Vec<f64> },
}

impl PotentialSpec {
    pub fn sampled(grid: RadialGrid, s: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if s.len() != grid.len() {
            return Err(Error::LengthMismatch(s.len(), grid.len()));
        }
        if v.len() != grid.len() {
            return Err(Error::LengthMismatch(v.len(), grid.len()));
        }
        if let Some(&bad) = s.iter().chain(v.iter()).find(|x| !x.is_finite()) {
            return Err(Error::NonFiniteValue(bad));
        }
        Ok(Self::Sampled { grid, s, v })
    }

    /// (S(r), V(r)).
    pub fn eval(&self, r: f64) -> Result<(f64, f64)> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::NonPositiveRadius(r));
        }
        match self {
            PotentialSpec::Hulthen(p) => {
                let t = p.screening(r);
                Ok((-p.s0 * t, -p.v0 * t))
            }
            PotentialSpec::PowerSeries(p) => Ok((p.scalar(r), p.vector(r))),
            PotentialSpec::Sampled { grid, s, v } => {
                let (lo, hi) = (grid.r_min(), grid.r_max());
                if r < lo || r > hi {
                    return Err(Error::OutOfGridRange { r, min: lo, max: hi });
                }
                let x = (r - lo) / grid.h();
                let i = (x.floor() as usize).min(grid.len() - 2);
                let w = x - i as f64;
                Ok((s[i] + w * (s[i + 1] - s[i]), v[i] + w * (v[i + 1] - v[i])))
            }
        }
    }

    /// True when the vector channel vanishes identically.
    pub fn vector_is_zero(&self) -> bool {
        match self {
            PotentialSpec::Hulthen(p) => p.v0 == 0.0,
            PotentialSpec::PowerSeries(p) => p.vector_is_zero(),
            PotentialSpec::Sampled { v, .. } => v.iter().all(|&x| x == 0.0),
        }
    }
}

/// U(r) = 2(m·S(r) + E·V(r)), the strength driving the non-relativistic part.
pub fn nonrel_strength(spec: &PotentialSpec, params: PhysParams, energy: f64, r: f64) -> Result<f64> {
    let (s, v) = spec.eval(r)?;
    Ok(2.0 * (params.m * s + energy * v))
}

/// S²(r) − V²(r), the strength driving the relativistic correction.
pub fn rel_strength(spec: &PotentialSpec, r: f64) -> Result<f64> {
    let (s, v) = spec.eval(r)?;
    Ok(s * s - v * v)
}
