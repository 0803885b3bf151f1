//! Superpotentials, pointwise verification of the two Riccati relations the
//! χ/φ split produces, and reconstruction of wavefunctions from
//! superpotentials.
//!
//! The non-relativistic relation is W² − W′/√(2m) = U(r) − ε with
//! W = −χ′/(√(2m)χ); the correction relation is
//! ΔW² − ΔW′/√(2m) + 2WΔW = (S² − V²) − Δε.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::par;

type EvalFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// r ↦ (W(r), W′(r)) with a label. The derivative is analytic when a closed
/// form exists; otherwise the superpotential is marked numeric and
/// differentiated by central differences over the working grid at residual
/// time.
pub struct Superpotential {
    label: String,
    value: EvalFn,
    derivative: Option<EvalFn>,
}

impl Superpotential {
    pub fn new<F, G>(label: impl Into<String>, value: F, derivative: G) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { label: label.into(), value: Box::new(value), derivative: Some(Box::new(derivative)) }
    }

    pub fn numeric<F>(label: impl Into<String>, value: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { label: label.into(), value: Box::new(value), derivative: None }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value(&self, r: f64) -> f64 {
        (self.value)(r)
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    /// W and W′ on every grid node. Numeric superpotentials get central
    /// differences in the interior and one-sided differences at the ends.
    pub fn sample(&self, grid: &RadialGrid) -> (Vec<f64>, Vec<f64>) {
        let values = par::map_slice(grid.nodes(), |&r| (self.value)(r));
        let derivs = match &self.derivative {
            Some(d) => par::map_slice(grid.nodes(), |&r| d(r)),
            None => finite_difference(&values, grid.h()),
        };
        (values, derivs)
    }
}

fn finite_difference(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    out[0] = (values[1] - values[0]) / h;
    out[n - 1] = (values[n - 1] - values[n - 2]) / h;
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    }
    out
}

/// Pointwise residual of one of the Riccati relations over a grid.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub sup_norm: f64,
    pub argmax_r: f64,
    pub per_node: Option<Vec<f64>>,
}

impl ResidualReport {
    fn from_nodes(grid: &RadialGrid, per_node: Vec<f64>, keep_nodes: bool) -> Result<Self> {
        let mut sup = 0.0;
        let mut arg = grid.nodes()[0];
        for (i, &v) in per_node.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue(grid.nodes()[i]));
            }
            if v.abs() > sup {
                sup = v.abs();
                arg = grid.nodes()[i];
            }
        }
        Ok(Self { sup_norm: sup, argmax_r: arg, per_node: keep_nodes.then_some(per_node) })
    }
}

/// Residual of W² − W′/√(2m) − (U − ε) on each node.
pub fn residual_nonrel<U>(
    w: &Superpotential,
    u: U,
    eps: f64,
    m: f64,
    grid: &RadialGrid,
    keep_nodes: bool,
) -> Result<ResidualReport>
where
    U: Fn(f64) -> f64 + Send + Sync,
{
    let s2m = (2.0 * m).sqrt();
    let (wv, wd) = w.sample(grid);
    let per_node = par::map_range(grid.len(), |i| {
        let r = grid.nodes()[i];
        wv[i] * wv[i] - wd[i] / s2m - (u(r) - eps)
    });
    ResidualReport::from_nodes(grid, per_node, keep_nodes)
}

/// Residual of ΔW² − ΔW′/√(2m) + 2WΔW − (ΔU − Δε) on each node.
pub fn residual_rel<U>(
    w: &Superpotential,
    dw: &Superpotential,
    du: U,
    deps: f64,
    m: f64,
    grid: &RadialGrid,
    keep_nodes: bool,
) -> Result<ResidualReport>
where
    U: Fn(f64) -> f64 + Send + Sync,
{
    let s2m = (2.0 * m).sqrt();
    let (wv, _) = w.sample(grid);
    let (dv, dd) = dw.sample(grid);
    let per_node = par::map_range(grid.len(), |i| {
        let r = grid.nodes()[i];
        dv[i] * dv[i] - dd[i] / s2m + 2.0 * wv[i] * dv[i] - (du(r) - deps)
    });
    ResidualReport::from_nodes(grid, per_node, keep_nodes)
}

/// Ground-state reconstruction χ(r) = exp(−√(2m)∫W dz) by cumulative
/// trapezoid from `r_min`, rescaled to max-abs 1. The wavefunction stays
/// unnormalized; proper L² normalization is a presentation choice left to
/// callers.
pub fn wavefunction(w: &Superpotential, m: f64, grid: &RadialGrid) -> Result<Vec<f64>> {
    let s2m = (2.0 * m).sqrt();
    let values = par::map_slice(grid.nodes(), |&r| w.value(r));
    let integral = grid.cumtrapz(&values);
    let mut samples = Vec::with_capacity(grid.len());
    for &i in &integral {
        let exponent = -s2m * i;
        if exponent > 709.0 {
            return Err(Error::Overflow(exponent));
        }
        samples.push(exponent.exp());
    }
    rescale_max_abs(&mut samples);
    Ok(samples)
}

/// Pointwise product ψ = χφ, rescaled to max-abs 1. An identically zero
/// input is passed through unscaled.
pub fn combine(chi: &[f64], phi: &[f64]) -> Result<Vec<f64>> {
    if chi.len() != phi.len() {
        return Err(Error::LengthMismatch(chi.len(), phi.len()));
    }
    let mut psi: Vec<f64> = chi.iter().zip(phi).map(|(&c, &p)| c * p).collect();
    rescale_max_abs(&mut psi);
    Ok(psi)
}

pub(crate) fn rescale_max_abs(samples: &mut [f64]) {
    let max = samples.iter().fold(0.0_f64, |a, &x| a.max(x.abs()));
    if max > 0.0 {
        for x in samples.iter_mut() {
            *x /= max;
        }
    }
}
