//! Order-by-order logarithmic perturbation engine for the relativistic
//! correction when the correction Riccati equation has no closed form.
//!
//! The order-k equation 2W·ΔWₖ − ΔWₖ′/√(2m) = sourceₖ − Δεₖ becomes a total
//! derivative after multiplying by χ²: (χ²ΔWₖ)′ = −√(2m)·χ²(sourceₖ − Δεₖ).
//! Solvability fixes Δεₖ as the χ²-weighted average of sourceₖ, and the
//! tail integral gives ΔWₖ(r) = √(2m)·[∫ᵣ^{rmax} χ²(source − Δεₖ)]/χ²(r).
//! The source recursion is source₁ = ΔV₁, source₂ = ΔV₂ − ΔW₁²,
//! source₃ = ΔV₃ − 2ΔW₁ΔW₂.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::potentials::PowerSeriesPair;
use crate::riccati::{self, Superpotential};

/// Floor below which χ² no longer supports the division; nodes beyond are
/// trimmed rather than crashing.
const CHI2_FLOOR: f64 = 1e-300;

/// Tail-mass requirement: χ²(r_max)·max|source| must be below this fraction
/// of ∫χ² or the domain is extended.
const TAIL_FRACTION: f64 = 1e-14;

const MAX_DOUBLINGS: usize = 4;

/// One order of the expansion.
#[derive(Debug, Clone)]
pub struct PerturbationOrder {
    pub k: usize,
    pub deps: f64,
    pub d_w: Vec<f64>,
    /// Nodes past this index had χ² below the division floor; their ΔWₖ is
    /// forced to zero.
    pub valid_len: usize,
}

/// The full series up to order K with its base state.
#[derive(Debug, Clone)]
pub struct PerturbationSeries {
    pub grid: RadialGrid,
    pub chi: Vec<f64>,
    pub orders: Vec<PerturbationOrder>,
    pub warnings: Vec<String>,
}

impl PerturbationSeries {
    /// Δε(λ) = Σ λᵏ Δεₖ.
    pub fn energy_correction(&self, lambda: f64) -> f64 {
        self.orders.iter().map(|o| lambda.powi(o.k as i32) * o.deps).sum()
    }

    /// Partial sum through order `k_max`.
    pub fn energy_correction_through(&self, lambda: f64, k_max: usize) -> f64 {
        self.orders
            .iter()
            .filter(|o| o.k <= k_max)
            .map(|o| lambda.powi(o.k as i32) * o.deps)
            .sum()
    }
}

/// The six (power, coefficient) terms of ΔV = S² − V² for a power-series
/// pair: powers {−2, 0, 1, 2, 3, 4}. The constant term is the cross-term
/// shift 2(s0·s1 − v0·v1).
pub fn delta_v_terms(p: &PowerSeriesPair) -> [(i32, f64); 6] {
    [
        (-2, p.s0 * p.s0 - p.v0 * p.v0),
        (0, 2.0 * (p.s0 * p.s1 - p.v0 * p.v1)),
        (1, 2.0 * (p.s0 * p.s2 - p.v0 * p.v2)),
        (2, p.s1 * p.s1 - p.v1 * p.v1),
        (3, 2.0 * (p.s1 * p.s2 - p.v1 * p.v2)),
        (4, p.s2 * p.s2 - p.v2 * p.v2),
    ]
}

/// ΔV evaluated from its term list.
pub fn delta_v_eval(p: &PowerSeriesPair, r: f64) -> f64 {
    delta_v_terms(p).iter().map(|&(pow, c)| c * r.powi(pow)).sum()
}

/// Solve one perturbation order: Δεₖ from the solvability condition, ΔWₖ
/// from the tail integral. Both quadratures are cumulative/total trapezoid
/// on the grid so the solvability condition and the tail integral are
/// mutually consistent (the tail integral vanishes identically at `r_min`).
pub fn order_correction(
    chi2: &[f64],
    source: &[f64],
    m: f64,
    grid: &RadialGrid,
) -> Result<(f64, Vec<f64>, usize)> {
    if chi2.len() != grid.len() {
        return Err(Error::LengthMismatch(chi2.len(), grid.len()));
    }
    if source.len() != grid.len() {
        return Err(Error::LengthMismatch(source.len(), grid.len()));
    }
    if chi2.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::NonNormalizableBase("chi^2 has negative or non-finite samples".into()));
    }
    if let Some(&bad) = source.iter().find(|x| !x.is_finite()) {
        return Err(Error::NonFiniteValue(bad));
    }
    let norm = grid.trapz(chi2);
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::NonNormalizableBase(format!("∫chi² = {norm}")));
    }
    let weighted: Vec<f64> = chi2.iter().zip(source).map(|(&c, &s)| c * s).collect();
    let deps = grid.trapz(&weighted) / norm;

    // tail integral J(r) = ∫_r^{rmax} χ²(source − Δε), by right-to-left
    // cumulative trapezoid
    let n = grid.len();
    let h = grid.h();
    let g: Vec<f64> = chi2.iter().zip(source).map(|(&c, &s)| c * (s - deps)).collect();
    let mut d_w = vec![0.0; n];
    let s2m = (2.0 * m).sqrt();
    let mut tail = 0.0;
    let mut valid_len = n;
    // walk from the right so each node's tail integral accumulates once
    let mut pending: Vec<(usize, f64)> = Vec::with_capacity(n);
    for i in (0..n).rev() {
        if i < n - 1 {
            tail += 0.5 * h * (g[i] + g[i + 1]);
        }
        pending.push((i, tail));
    }
    for (i, t) in pending {
        if chi2[i] < CHI2_FLOOR {
            d_w[i] = 0.0;
            valid_len = valid_len.min(i);
        } else {
            d_w[i] = s2m * t / chi2[i];
        }
    }
    // trimming only applies to the far tail; an interior underflow would
    // leave valid_len pointing before supported nodes, which callers treat
    // as the usable prefix
    Ok((deps, d_w, valid_len))
}

/// Run the series for the relativistic correction ΔV = S² − V² of a
/// power-series pair, assigned entirely to order 1. The grid is extended
/// (doubled r_max, up to four times) when the base state still has tail
/// mass at r_max.
pub fn run_series(
    base_chi: &[f64],
    w: &Superpotential,
    p: &PowerSeriesPair,
    k_max: usize,
    m: f64,
    grid: &RadialGrid,
) -> Result<PerturbationSeries> {
    if !(1..=3).contains(&k_max) {
        return Err(Error::InvalidParameter(format!("order must be 1..=3, got {k_max}")));
    }
    if base_chi.len() != grid.len() {
        return Err(Error::LengthMismatch(base_chi.len(), grid.len()));
    }

    let mut grid = grid.clone();
    let mut chi: Vec<f64> = base_chi.to_vec();
    let mut warnings = Vec::new();
    for attempt in 0..=MAX_DOUBLINGS {
        let chi2: Vec<f64> = chi.iter().map(|&c| c * c).collect();
        let norm = grid.trapz(&chi2);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NonNormalizableBase(format!("∫chi² = {norm}")));
        }
        let max_src = grid
            .nodes()
            .iter()
            .map(|&r| delta_v_eval(p, r).abs())
            .fold(0.0_f64, f64::max);
        if chi2[chi2.len() - 1] * max_src < TAIL_FRACTION * norm {
            break;
        }
        if attempt == MAX_DOUBLINGS {
            return Err(Error::NonNormalizableBase(format!(
                "base state keeps tail mass at r_max = {} after {MAX_DOUBLINGS} domain doublings",
                grid.r_max()
            )));
        }
        grid = RadialGrid::from_step(grid.r_min(), 2.0 * grid.r_max(), grid.h())?;
        chi = riccati::wavefunction(w, m, &grid)?;
        warnings.push(format!("domain extended to r_max = {}", grid.r_max()));
    }

    let source1: Vec<f64> = grid.nodes().iter().map(|&r| delta_v_eval(p, r)).collect();
    let series = run_series_sources(&chi, &[source1], k_max, m, &grid)?;
    Ok(PerturbationSeries { warnings, ..series })
}

/// Run the series with an explicit λ-split of the perturbation: `sources[j]`
/// is ΔV_{j+1} sampled on the grid; missing orders are zero.
pub fn run_series_sources(
    base_chi: &[f64],
    delta_v_orders: &[Vec<f64>],
    k_max: usize,
    m: f64,
    grid: &RadialGrid,
) -> Result<PerturbationSeries> {
    if !(1..=3).contains(&k_max) {
        return Err(Error::InvalidParameter(format!("order must be 1..=3, got {k_max}")));
    }
    let n = grid.len();
    if base_chi.len() != n {
        return Err(Error::LengthMismatch(base_chi.len(), n));
    }
    let chi2: Vec<f64> = base_chi.iter().map(|&c| c * c).collect();
    let zero = vec![0.0; n];
    let dv = |k: usize| -> &[f64] { delta_v_orders.get(k - 1).map(Vec::as_slice).unwrap_or(&zero) };

    let mut orders = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let source: Vec<f64> = match k {
            1 => dv(1).to_vec(),
            2 => {
                let w1 = &orders[0] as &PerturbationOrder;
                dv(2)
                    .iter()
                    .zip(&w1.d_w)
                    .map(|(&v, &w)| v - w * w)
                    .collect()
            }
            3 => {
                let w1: &PerturbationOrder = &orders[0];
                let w2: &PerturbationOrder = &orders[1];
                dv(3)
                    .iter()
                    .zip(w1.d_w.iter().zip(&w2.d_w))
                    .map(|(&v, (&a, &b))| v - 2.0 * a * b)
                    .collect()
            }
            _ => unreachable!(),
        };
        let (deps, d_w, valid_len) = order_correction(&chi2, &source, m, grid)?;
        orders.push(PerturbationOrder { k, deps, d_w, valid_len });
    }

    Ok(PerturbationSeries {
        grid: grid.clone(),
        chi: base_chi.to_vec(),
        orders,
        warnings: Vec::new(),
    })
}

/// φ(r; λ) = exp(−√(2m)·∫ Σₖ λᵏ ΔWₖ), rescaled to max-abs 1.
pub fn corrected_wavefunction(series: &PerturbationSeries, m: f64, lambda: f64) -> Result<Vec<f64>> {
    let n = series.grid.len();
    let mut sum = vec![0.0; n];
    for order in &series.orders {
        let scale = lambda.powi(order.k as i32);
        for (acc, &w) in sum.iter_mut().zip(&order.d_w) {
            *acc += scale * w;
        }
    }
    let integral = series.grid.cumtrapz(&sum);
    let s2m = (2.0 * m).sqrt();
    let mut phi = Vec::with_capacity(n);
    for &i in &integral {
        let exponent = -s2m * i;
        if exponent > 709.0 {
            return Err(Error::Overflow(exponent));
        }
        phi.push(exponent.exp());
    }
    riccati::rescale_max_abs(&mut phi);
    Ok(phi)
}

/// Sup-norm residual of the order-k equation
/// 2W·ΔWₖ − ΔWₖ′/√(2m) − (sourceₖ − Δεₖ) over nodes where the base state
/// still supports the division (χ² ≥ trim·max χ²). ΔWₖ′ is taken by central
/// differences.
pub fn order_equation_residual(
    w_values: &[f64],
    order: &PerturbationOrder,
    source: &[f64],
    chi2: &[f64],
    m: f64,
    grid: &RadialGrid,
    trim: f64,
) -> f64 {
    let s2m = (2.0 * m).sqrt();
    let h = grid.h();
    let max_chi2 = chi2.iter().cloned().fold(0.0_f64, f64::max);
    let mut sup = 0.0_f64;
    for i in 1..grid.len() - 1 {
        if chi2[i] < trim * max_chi2 {
            continue;
        }
        let dwp = (order.d_w[i + 1] - order.d_w[i - 1]) / (2.0 * h);
        let res = 2.0 * w_values[i] * order.d_w[i] - dwp / s2m - (source[i] - order.deps);
        sup = sup.max(res.abs());
    }
    sup
}
