//! Independent finite-difference cross-check. Discretizes −χ″ + U(r)χ = εχ
//! on the working grid and extracts the lowest eigenvalues by Sturm-count
//! bisection, with no reference to any closed-form machinery.
//!
//! Boundary convention: the unknowns live on every grid node and Dirichlet
//! walls sit one spacing outside at r_min − h and r_max + h. With the usual
//! r_min = h the left wall lands exactly at the origin, which is what the
//! regular s-wave solution χ(0) = 0 wants.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::par;
use crate::potentials::{self, PhysParams, PotentialSpec};

/// Symmetric tridiagonal matrix: `diag` of length n, `off` of length n − 1.
#[derive(Debug, Clone)]
pub struct TridiagonalSystem {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if off.len() + 1 != diag.len() {
            return Err(Error::LengthMismatch(diag.len(), off.len()));
        }
        if let Some(&bad) = diag.iter().chain(off.iter()).find(|x| !x.is_finite()) {
            return Err(Error::NonFiniteValue(bad));
        }
        Ok(Self { diag, off })
    }

    /// Gershgorin bounds containing the whole spectrum.
    pub fn spectrum_bounds(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut radius = 0.0;
            if i > 0 {
                radius += self.off[i - 1].abs();
            }
            if i < n - 1 {
                radius += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - radius);
            hi = hi.max(self.diag[i] + radius);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x`, via the LDLᵀ pivot signs of
    /// T − xI. Vanishing pivots are nudged to ±1e−300 so the recursion never
    /// divides by zero; the count stays exact for x off the spectrum.
    pub fn sturm_count(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = self.diag[0] - x;
        if d == 0.0 {
            d = -1e-300;
        }
        if d < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let e = self.off[i - 1];
            d = self.diag[i] - x - e * e / d;
            if d == 0.0 {
                d = -1e-300;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }
}

/// Result of one eigenvalue extraction.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub eigenvalues: Vec<f64>,
    /// Total bisection steps across all requested eigenvalues.
    pub iterations: usize,
    pub converged: bool,
}

const MAX_BISECTIONS: usize = 200;
const REL_TOL: f64 = 1e-13;

fn bisect_index(sys: &TridiagonalSystem, j: usize, mut lo: f64, mut hi: f64) -> (f64, usize, bool) {
    // λ_j is the infimum of { x : count(x) ≥ j + 1 }
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let tol = REL_TOL * scale;
    let mut steps = 0;
    while hi - lo > tol && steps < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if sys.sturm_count(mid) >= j + 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
    }
    (0.5 * (lo + hi), steps, hi - lo <= tol)
}

/// The `k` smallest eigenvalues by Sturm bisection, one independent bracket
/// per index so the indices parallelize cleanly.
pub fn eigen_smallest(sys: &TridiagonalSystem, k: usize) -> Result<OracleResult> {
    if k == 0 || k > sys.diag.len() {
        return Err(Error::InvalidParameter(format!(
            "requested {k} eigenvalues of a {} x {} system",
            sys.diag.len(),
            sys.diag.len()
        )));
    }
    let (lo, hi) = sys.spectrum_bounds();
    let results = par::map_range(k, |j| bisect_index(sys, j, lo, hi));
    let mut eigenvalues = Vec::with_capacity(k);
    let mut iterations = 0;
    let mut converged = true;
    for (lambda, steps, ok) in results {
        eigenvalues.push(lambda);
        iterations += steps;
        converged &= ok;
    }
    Ok(OracleResult { eigenvalues, iterations, converged })
}

/// Smallest eigenvalue with a warm-start bracket around a previous estimate.
/// The bracket is widened geometrically until Sturm counts confirm it holds
/// λ₀, falling back to the Gershgorin interval after a few failures.
pub fn eigen_ground_warm(sys: &TridiagonalSystem, previous: f64, width: f64) -> Result<OracleResult> {
    let mut half = width.max(1e-8 * previous.abs().max(1.0));
    for _ in 0..6 {
        let (lo, hi) = (previous - half, previous + half);
        if sys.sturm_count(lo) == 0 && sys.sturm_count(hi) >= 1 {
            let (lambda, steps, ok) = bisect_index(sys, 0, lo, hi);
            return Ok(OracleResult { eigenvalues: vec![lambda], iterations: steps, converged: ok });
        }
        half *= 8.0;
    }
    eigen_smallest(sys, 1)
}

/// Assemble −χ″ + U(r)χ on the grid with the ghost-wall convention.
pub fn assemble<U>(u: U, grid: &RadialGrid) -> Result<TridiagonalSystem>
where
    U: Fn(f64) -> f64 + Send + Sync,
{
    let h = grid.h();
    let inv_h2 = 1.0 / (h * h);
    let diag: Vec<f64> = grid.nodes().iter().map(|&r| 2.0 * inv_h2 + u(r)).collect();
    if let Some(i) = diag.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinitePotential(grid.nodes()[i]));
    }
    let off = vec![-inv_h2; grid.len() - 1];
    Ok(TridiagonalSystem { diag, off })
}

/// Lowest `k` values of ε for χ″ = (U − ε)χ, U given directly.
pub fn schrodinger_fd<U>(u: U, grid: &RadialGrid, k: usize) -> Result<OracleResult>
where
    U: Fn(f64) -> f64 + Send + Sync,
{
    let sys = assemble(u, grid)?;
    eigen_smallest(&sys, k)
}

/// Progress of the Klein–Gordon fixed point E ↦ √(m² + λ₀(E)).
#[derive(Debug, Clone)]
pub struct KleinGordonOracle {
    pub energy: f64,
    pub lambda: f64,
    pub iterations: usize,
    pub bisection_steps: usize,
    pub converged: bool,
}

const KG_TOL: f64 = 1e-10;
const KG_MAX_ITERS: usize = 200;

/// Ground-state energy of the full equation
/// χ″ = (2mS + S² − V² + 2EV − (E² − m²))χ by self-consistent iteration:
/// assemble U_eff at the current E, take the smallest eigenvalue λ, update
/// E ← √(m² + λ). The first step is undamped, later steps damped by 1/2.
/// A vanishing vector channel makes U_eff energy-independent and the loop
/// collapses to a single eigenvalue solve.
pub fn kleingordon_fd(spec: &PotentialSpec, params: PhysParams, grid: &RadialGrid) -> Result<KleinGordonOracle> {
    let m = params.m;
    let system_at = |energy: f64| -> Result<TridiagonalSystem> {
        let h = grid.h();
        let inv_h2 = 1.0 / (h * h);
        let mut diag = Vec::with_capacity(grid.len());
        for &r in grid.nodes() {
            let u = potentials::nonrel_strength(spec, params, energy, r)?
                + potentials::rel_strength(spec, r)?;
            if !u.is_finite() {
                return Err(Error::NonFinitePotential(r));
            }
            diag.push(2.0 * inv_h2 + u);
        }
        let off = vec![-inv_h2; grid.len() - 1];
        Ok(TridiagonalSystem { diag, off })
    };

    if spec.vector_is_zero() {
        let sys = system_at(m)?;
        let res = eigen_smallest(&sys, 1)?;
        let lambda = res.eigenvalues[0];
        let e2 = m * m + lambda;
        if e2 < 0.0 {
            return Err(Error::ComplexEnergy(e2));
        }
        return Ok(KleinGordonOracle {
            energy: e2.sqrt(),
            lambda,
            iterations: 1,
            bisection_steps: res.iterations,
            converged: res.converged,
        });
    }

    let mut energy = m * (1.0 - 1e-3);
    let mut lambda_prev: Option<f64> = None;
    let mut bisection_steps = 0;
    for it in 0..KG_MAX_ITERS {
        let sys = system_at(energy)?;
        let res = match lambda_prev {
            Some(prev) => eigen_ground_warm(&sys, prev, 1e-4 * prev.abs().max(1.0))?,
            None => eigen_smallest(&sys, 1)?,
        };
        bisection_steps += res.iterations;
        let lambda = res.eigenvalues[0];
        lambda_prev = Some(lambda);
        let e2 = m * m + lambda;
        if e2 < 0.0 {
            return Err(Error::ComplexEnergy(e2));
        }
        let target = e2.sqrt();
        let next = if it == 0 { target } else { 0.5 * (energy + target) };
        if (next - energy).abs() < KG_TOL * energy.abs().max(1.0) {
            return Ok(KleinGordonOracle {
                energy: next,
                lambda,
                iterations: it + 1,
                bisection_steps,
                converged: true,
            });
        }
        energy = next;
    }
    Err(Error::NoConvergence(format!(
        "Klein-Gordon fixed point did not settle after {KG_MAX_ITERS} iterations (last E = {energy})"
    )))
}
