//! Closed-form ground state for the screened-Coulomb (Hulthén) scalar/vector
//! pair: non-relativistic part, relativistic correction, and the
//! self-consistent full energy.
//!
//! With t = 1/(e^{αr} − 1) and U0 = 2(m·s0 + E·v0), the non-relativistic
//! superpotential is W = −(α/√(2m))t + A and the correction superpotential
//! is ΔW = −δ(α/√(2m))t + B. The full energy satisfies
//! E² − m² = ε + Δε = −(1/(8mα²))[2mU0/(δ+1) − α²]², which is implicit in E
//! whenever v0 ≠ 0 because U0 depends on E.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::potentials::HulthenPair;
use crate::riccati::{self, ResidualReport, Superpotential};

/// (1 − e^{−αr})^power · e^{−decay·r}; the closed-form shape of χ, φ and ψ.
#[derive(Debug, Clone, Copy)]
pub struct HulthenWaveform {
    pub power: f64,
    pub decay: f64,
    pub alpha: f64,
}

impl HulthenWaveform {
    pub fn eval(&self, r: f64) -> f64 {
        (-(-self.alpha * r).exp_m1()).powf(self.power) * (-self.decay * r).exp()
    }

    pub fn sample(&self, grid: &RadialGrid) -> Vec<f64> {
        let mut out: Vec<f64> = grid.nodes().iter().map(|&r| self.eval(r)).collect();
        riccati::rescale_max_abs(&mut out);
        out
    }
}

/// A = (√(m/2)/α)(U0 − α²/(2m)).
pub fn coefficient_a(m: f64, alpha: f64, u0: f64) -> f64 {
    (m / 2.0).sqrt() / alpha * (u0 - alpha * alpha / (2.0 * m))
}

/// B = −√(m/2)·δ·U0/(α(δ+1)).
pub fn coefficient_b(m: f64, alpha: f64, u0: f64, delta: f64) -> f64 {
    -(m / 2.0).sqrt() * delta * u0 / (alpha * (delta + 1.0))
}

/// δ = −1/2 + √(2m(s0² − v0²)/α² + 1/4). Requires the scalar channel to
/// dominate; otherwise δ would be complex and no bound-state treatment
/// applies.
pub fn delta(m: f64, alpha: f64, s0: f64, v0: f64) -> Result<f64> {
    let diff = s0 * s0 - v0 * v0;
    if diff < 0.0 {
        return Err(Error::VectorDominates { s0_sq: s0 * s0, v0_sq: v0 * v0 });
    }
    Ok(-0.5 + (2.0 * m * diff / (alpha * alpha) + 0.25).sqrt())
}

/// Non-relativistic ground state: ε = −A² with χ = (1 − e^{−αr})e^{−√(2m)Ar}.
pub fn nonrel_ground(m: f64, alpha: f64, u0: f64) -> Result<(f64, HulthenWaveform)> {
    let a = coefficient_a(m, alpha, u0);
    if a <= 0.0 {
        return Err(Error::NoBoundState(format!(
            "A = {a} <= 0: the non-relativistic wavefunction does not decay"
        )));
    }
    let chi = HulthenWaveform { power: 1.0, decay: (2.0 * m).sqrt() * a, alpha };
    Ok((-a * a, chi))
}

/// Relativistic correction: Δε = −B(B + 2A) with
/// φ = (1 − e^{−αr})^δ e^{−√(2m)Br}.
pub fn rel_correction(m: f64, alpha: f64, u0: f64, delta: f64) -> (f64, HulthenWaveform) {
    let a = coefficient_a(m, alpha, u0);
    let b = coefficient_b(m, alpha, u0, delta);
    let deps = -b * (b + 2.0 * a);
    let phi = HulthenWaveform { power: delta, decay: (2.0 * m).sqrt() * b, alpha };
    (deps, phi)
}

/// Expanded print of the correction energy,
/// δU0/(2α²(δ+1)²)·[mU0(δ+2) − α²(δ+1)]. Equals −B(B+2A) algebraically.
pub fn rel_correction_expanded(m: f64, alpha: f64, u0: f64, delta: f64) -> f64 {
    let dp1 = delta + 1.0;
    delta * u0 / (2.0 * alpha * alpha * dp1 * dp1) * (m * u0 * (delta + 2.0) - alpha * alpha * dp1)
}

/// W = −(α/√(2m))/(e^{αr} − 1) + A with its analytic derivative.
pub fn superpotential(m: f64, alpha: f64, u0: f64) -> Superpotential {
    let s2m = (2.0 * m).sqrt();
    let a = coefficient_a(m, alpha, u0);
    let c = alpha / s2m;
    Superpotential::new(
        "hulthen ground",
        move |r: f64| {
            let t = 1.0 / (alpha * r).exp_m1();
            -c * t + a
        },
        move |r: f64| {
            let t = 1.0 / (alpha * r).exp_m1();
            c * alpha * (t * t + t)
        },
    )
}

/// ΔW = −δ(α/√(2m))/(e^{αr} − 1) + B with its analytic derivative.
pub fn correction_superpotential(m: f64, alpha: f64, u0: f64, delta: f64) -> Superpotential {
    let s2m = (2.0 * m).sqrt();
    let b = coefficient_b(m, alpha, u0, delta);
    let c = delta * alpha / s2m;
    Superpotential::new(
        "hulthen correction",
        move |r: f64| {
            let t = 1.0 / (alpha * r).exp_m1();
            -c * t + b
        },
        move |r: f64| {
            let t = 1.0 / (alpha * r).exp_m1();
            c * alpha * (t * t + t)
        },
    )
}

/// Full self-consistent ground-state solution.
#[derive(Debug)]
pub struct HulthenSolution {
    pub a: f64,
    pub b: f64,
    pub delta: f64,
    pub u0: f64,
    pub eps: f64,
    pub deps: f64,
    pub energy: f64,
    pub residual_nr: Option<f64>,
    pub residual_rel: Option<f64>,
    /// Every admissible root of the implicit energy equation found in (0, m),
    /// ascending. `energy` is the largest.
    pub roots: Vec<f64>,
    /// f evaluated at the bracket ends (0⁺, m⁻).
    pub bracket_values: (f64, f64),
    pub warnings: Vec<String>,
    mass: f64,
    alpha_store: f64,
}

impl HulthenSolution {
    pub fn chi_form(&self) -> HulthenWaveform {
        HulthenWaveform { power: 1.0, decay: self.sqrt_2m() * self.a, alpha: self.alpha() }
    }

    pub fn phi_form(&self) -> HulthenWaveform {
        HulthenWaveform { power: self.delta, decay: self.sqrt_2m() * self.b, alpha: self.alpha() }
    }

    /// Combined closed form ψ = χφ. The exponent carries
    /// mU0/(α(δ+1)) − α/2, the sign the combined residual check selects.
    pub fn psi_form(&self) -> HulthenWaveform {
        HulthenWaveform {
            power: self.delta + 1.0,
            decay: self.sqrt_2m() * (self.a + self.b),
            alpha: self.alpha(),
        }
    }

    fn sqrt_2m(&self) -> f64 {
        (2.0 * self.mass).sqrt()
    }

    fn alpha(&self) -> f64 {
        self.alpha_store
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}

/// Implicit energy equation f(E) = E² − m² + (1/(8mα²))[2mU0(E)/(δ+1) − α²]².
fn energy_equation(m: f64, pair: &HulthenPair, delta: f64, e: f64) -> f64 {
    let alpha = pair.alpha;
    let u0 = 2.0 * (m * pair.s0 + e * pair.v0);
    let inner = 2.0 * m * u0 / (delta + 1.0) - alpha * alpha;
    e * e - m * m + inner * inner / (8.0 * m * alpha * alpha)
}

const SCAN_PANELS: usize = 64;

/// Default verification grid for residual reports.
pub fn default_grid() -> RadialGrid {
    RadialGrid::from_step(1e-3, 40.0, 1e-3).expect("static grid parameters are valid")
}

pub fn solve_ground(m: f64, pair: &HulthenPair) -> Result<HulthenSolution> {
    let grid = default_grid();
    solve_ground_on(m, pair, Some(&grid))
}

/// Solve the implicit energy equation on (0, m) and assemble the solution.
/// With `grid = None` the residual reports are skipped.
pub fn solve_ground_on(
    m: f64,
    pair: &HulthenPair,
    grid: Option<&RadialGrid>,
) -> Result<HulthenSolution> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidParameter(format!("rest mass must be positive, got {m}")));
    }
    let alpha = pair.alpha;
    let delta = delta(m, alpha, pair.s0, pair.v0)?;
    let f = |e: f64| energy_equation(m, pair, delta, e);

    let f_lo = f(0.0);
    let f_hi = f(m * (1.0 - 1e-14));

    // scan for sign changes, then polish each bracket
    let mut roots = Vec::new();
    let mut prev_e = 0.0;
    let mut prev_f = f_lo;
    for j in 1..=SCAN_PANELS {
        let e = m * j as f64 / (SCAN_PANELS as f64 + 1e-14);
        let fe = f(e);
        if prev_f == 0.0 {
            roots.push(prev_e);
        } else if prev_f * fe < 0.0 {
            roots.push(refine_root(&f, prev_e, e, prev_f, fe)?);
        }
        prev_e = e;
        prev_f = fe;
    }

    // keep roots whose wavefunctions decay: A > 0 and A + B > 0
    let admissible: Vec<f64> = roots
        .iter()
        .copied()
        .filter(|&e| {
            let u0 = 2.0 * (m * pair.s0 + e * pair.v0);
            let a = coefficient_a(m, alpha, u0);
            let b = coefficient_b(m, alpha, u0, delta);
            e > 0.0 && e < m && a > 0.0 && a + b > 0.0
        })
        .collect();

    let energy = *admissible.last().ok_or_else(|| {
        Error::NoBoundState(format!(
            "no root of the implicit energy equation in (0, {m}) with decaying wavefunction \
             (f(0+) = {f_lo}, f(m-) = {f_hi})"
        ))
    })?;

    let u0 = 2.0 * (m * pair.s0 + energy * pair.v0);
    let a = coefficient_a(m, alpha, u0);
    let b = coefficient_b(m, alpha, u0, delta);
    let eps = -a * a;
    let deps = -b * (b + 2.0 * a);

    let mut warnings = Vec::new();
    if admissible.len() > 1 {
        warnings.push(format!(
            "multiple admissible roots {admissible:?}; returning the largest (weakest binding)"
        ));
    }
    warnings.push(
        "psi closed form uses exponent [m*U0/(alpha*(delta+1)) - alpha/2]*r; the +alpha/2 \
         variant fails the combined Riccati residual check"
            .to_string(),
    );

    let (residual_nr, residual_rel) = match grid {
        Some(g) => {
            let w = superpotential(m, alpha, u0);
            let dw = correction_superpotential(m, alpha, u0, delta);
            let u = move |r: f64| -u0 / (alpha * r).exp_m1();
            let diff = pair.s0 * pair.s0 - pair.v0 * pair.v0;
            let du = move |r: f64| {
                let t = 1.0 / (alpha * r).exp_m1();
                diff * t * t
            };
            let nr = riccati::residual_nonrel(&w, u, eps, m, g, false)?;
            let rel = riccati::residual_rel(&w, &dw, du, deps, m, g, false)?;
            (Some(nr.sup_norm), Some(rel.sup_norm))
        }
        None => (None, None),
    };

    Ok(HulthenSolution {
        a,
        b,
        delta,
        u0,
        eps,
        deps,
        energy,
        residual_nr,
        residual_rel,
        roots: admissible,
        bracket_values: (f_lo, f_hi),
        warnings,
        mass: m,
        alpha_store: alpha,
    })
}

/// Residual reports for a solved state on an explicit grid.
pub fn residual_reports(
    sol: &HulthenSolution,
    pair: &HulthenPair,
    grid: &RadialGrid,
) -> Result<(ResidualReport, ResidualReport)> {
    let m = sol.mass;
    let alpha = pair.alpha;
    let u0 = sol.u0;
    let w = superpotential(m, alpha, u0);
    let dw = correction_superpotential(m, alpha, u0, sol.delta);
    let u = move |r: f64| -u0 / (alpha * r).exp_m1();
    let diff = pair.s0 * pair.s0 - pair.v0 * pair.v0;
    let du = move |r: f64| {
        let t = 1.0 / (alpha * r).exp_m1();
        diff * t * t
    };
    let nr = riccati::residual_nonrel(&w, u, sol.eps, m, grid, false)?;
    let rel = riccati::residual_rel(&w, &dw, du, sol.deps, m, grid, false)?;
    Ok((nr, rel))
}

/// Bisection down to a narrow bracket, then safeguarded secant until
/// |f| < 1e−13 or the bracket collapses to machine width.
fn refine_root<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> Result<f64> {
    debug_assert!(fa * fb < 0.0);
    for _ in 0..40 {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fa * fm < 0.0 {
            b = mid;
            fb = fm;
        } else {
            a = mid;
            fa = fm;
        }
        if b - a < 1e-6 * b.abs().max(1.0) {
            break;
        }
    }
    let (mut x0, mut f0, mut x1, mut f1) = (a, fa, b, fb);
    for _ in 0..100 {
        if f1.abs() < 1e-13 {
            return Ok(x1);
        }
        let denom = f1 - f0;
        let mut x2 = if denom != 0.0 { x1 - f1 * (x1 - x0) / denom } else { 0.5 * (a + b) };
        if !(x2 > a && x2 < b) {
            x2 = 0.5 * (a + b);
        }
        let f2 = f(x2);
        if f2 == 0.0 {
            return Ok(x2);
        }
        if fa * f2 < 0.0 {
            b = x2;
        } else {
            a = x2;
            fa = f2;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if b - a <= f64::EPSILON * b.abs() {
            return Ok(0.5 * (a + b));
        }
    }
    if f1.abs() < 1e-10 {
        return Ok(x1);
    }
    Err(Error::NoConvergence(format!(
        "root refinement stalled on [{a}, {b}] with |f| = {}",
        f1.abs()
    )))
}
