//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

use std::process::Command;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kgdecomp::coulombic::{self, LinearTermMode};
use kgdecomp::error::Error;
use kgdecomp::grid::RadialGrid;
use kgdecomp::hulthen;
use kgdecomp::oracle;
use kgdecomp::perturb;
use kgdecomp::potentials::{HulthenPair, PhysParams, PotentialSpec, PowerSeriesPair};
use kgdecomp::riccati;

/// Prints FAIL on panic-unwind, PASS when disarmed at the end of the test.
struct Outcome {
    name: &'static str,
    passed: bool,
}

impl Outcome {
    fn start(name: &'static str) -> Self {
        Self { name, passed: false }
    }

    fn pass(mut self) {
        self.passed = true;
    }
}

impl Drop for Outcome {
    fn drop(&mut self) {
        println!("{} {}", if self.passed { "PASS" } else { "FAIL" }, self.name);
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-30)
}

/// Random admissible screened-Coulomb draw: (m, alpha, s0, v0, u0) with a
/// dominating scalar channel and a bound non-relativistic state.
fn admissible_draw(rng: &mut ChaCha8Rng) -> (f64, f64, f64, f64, f64) {
    let m = rng.gen_range(0.5..2.0);
    let alpha = rng.gen_range(0.5..2.0);
    let s0 = rng.gen_range(0.1..1.5);
    let v0 = s0 * rng.gen_range(-0.95..0.95);
    let u0 = alpha * alpha / (2.0 * m) + rng.gen_range(0.01..3.0);
    (m, alpha, s0, v0, u0)
}

#[test]
fn criterion_01_hulthen_algebraic_identities() {
    let out = Outcome::start("criterion-01 screened-Coulomb algebraic identities (1000 draws)");
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..1000 {
        let (m, alpha, s0, v0, u0) = admissible_draw(&mut rng);
        let a = hulthen::coefficient_a(m, alpha, u0);
        let delta = hulthen::delta(m, alpha, s0, v0).unwrap();
        let b = hulthen::coefficient_b(m, alpha, u0, delta);

        let (eps, _) = hulthen::nonrel_ground(m, alpha, u0).unwrap();
        assert!(rel_close(eps, -a * a, 1e-12), "eps {eps} vs -A^2 {}", -a * a);

        let (deps, _) = hulthen::rel_correction(m, alpha, u0, delta);
        assert!(rel_close(deps, -b * (b + 2.0 * a), 1e-12));

        let expanded = hulthen::rel_correction_expanded(m, alpha, u0, delta);
        assert!(rel_close(deps, expanded, 1e-12), "printed forms differ: {deps} vs {expanded}");

        // near-threshold draws cancel A+B, so scale by the operand size
        let total = -(a + b) * (a + b);
        let scale = (a * a).max(b * b).max(total.abs());
        assert!(
            (eps + deps - total).abs() <= 1e-12 * scale,
            "eps+deps {} vs {total}",
            eps + deps
        );

        let lhs = delta * (delta + 1.0) * alpha * alpha / (2.0 * m);
        let rhs = s0 * s0 - v0 * v0;
        assert!(rel_close(lhs, rhs, 1e-12), "delta identity {lhs} vs {rhs}");
    }
    out.pass();
}

#[test]
fn criterion_02_riccati_residuals() {
    let out = Outcome::start("criterion-02 Riccati residuals on [1e-3, 40] (100 draws)");
    let grid = RadialGrid::from_step(1e-3, 40.0, 1e-3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for _ in 0..100 {
        let (m, alpha, s0, v0, u0) = admissible_draw(&mut rng);
        let a = hulthen::coefficient_a(m, alpha, u0);
        let delta = hulthen::delta(m, alpha, s0, v0).unwrap();
        let b = hulthen::coefficient_b(m, alpha, u0, delta);
        let eps = -a * a;
        let deps = -b * (b + 2.0 * a);

        let w = hulthen::superpotential(m, alpha, u0);
        let u = move |r: f64| -u0 / (alpha * r).exp_m1();
        let nr = riccati::residual_nonrel(&w, u, eps, m, &grid, false).unwrap();
        assert!(nr.sup_norm <= 1e-8, "base residual {} at r = {}", nr.sup_norm, nr.argmax_r);

        let dw = hulthen::correction_superpotential(m, alpha, u0, delta);
        let diff = s0 * s0 - v0 * v0;
        let du = move |r: f64| {
            let t = 1.0 / (alpha * r).exp_m1();
            diff * t * t
        };
        let rel = riccati::residual_rel(&w, &dw, du, deps, m, &grid, false).unwrap();
        assert!(rel.sup_norm <= 1e-8, "correction residual {} at r = {}", rel.sup_norm, rel.argmax_r);
    }
    out.pass();
}

#[test]
fn criterion_03_selfconsistent_exact_reductions() {
    let out = Outcome::start("criterion-03 self-consistent energy exact reductions");
    let pair = HulthenPair::new(1.25, 0.75, 1.0).unwrap();
    let sol = hulthen::solve_ground_on(1.0, &pair, None).unwrap();
    assert!((sol.energy - 23.0 / 41.0).abs() < 1e-12, "E = {}", sol.energy);

    let pair = HulthenPair::new(0.75, 0.75, 1.0).unwrap();
    let sol = hulthen::solve_ground_on(1.0, &pair, None).unwrap();
    let want = (-12.0 + 416.0_f64.sqrt()) / 34.0;
    assert!((sol.energy - want).abs() < 1e-12, "E = {} vs {want}", sol.energy);
    assert_eq!(sol.delta, 0.0);
    assert!(sol.deps.abs() < 1e-12, "deps = {}", sol.deps);
    out.pass();
}

#[test]
fn criterion_04_oracle_cross_validation() {
    let out = Outcome::start("criterion-04 oracle cross-validation at the matched convention");
    let m = 0.5;
    let pair = HulthenPair::new(1.25, 0.75, 1.0).unwrap();
    let sol = hulthen::solve_ground_on(m, &pair, None).unwrap();
    let params = PhysParams::new(m).unwrap();
    let spec = PotentialSpec::Hulthen(pair);

    let grid = RadialGrid::from_step(1e-3, 40.0, 1e-3).unwrap();
    let orc = oracle::kleingordon_fd(&spec, params, &grid).unwrap();
    let gap = (sol.energy - orc.energy).abs();
    assert!(gap <= 2e-4, "gap {gap} exceeds 2e-4");

    // the h-halving ratio needs a box large enough that domain truncation
    // (decay rate kappa = sqrt(m^2 - E^2) ~ 0.11) is below the h^2 error
    let kappa = (m * m - sol.energy * sol.energy).sqrt();
    let rmax = (40.0 / kappa).ceil();
    let gap_at = |h: f64| {
        let grid = RadialGrid::from_step(h, rmax, h).unwrap();
        let orc = oracle::kleingordon_fd(&spec, params, &grid).unwrap();
        (sol.energy - orc.energy).abs()
    };
    let coarse = gap_at(2e-3);
    let fine = gap_at(1e-3);
    let ratio = coarse / fine;
    assert!(
        (3.2..=4.8).contains(&ratio),
        "h-halving ratio {ratio} (gaps {coarse:.3e} -> {fine:.3e}) outside [3.2, 4.8]"
    );
    out.pass();
}

#[test]
fn criterion_05_coulombic_ground_state() {
    let out = Outcome::start("criterion-05 Coulomb-plus-oscillator ground state");
    let m = 0.5;
    let pair = PowerSeriesPair::scalar_only(-1.0, 2.0_f64.sqrt(), 2.0);
    let sol = coulombic::solve_selfconsistent(0, m, &pair, LinearTermMode::Verify).unwrap();
    let want = -0.25 + 3.0 * 2.0_f64.sqrt();
    assert!((sol.eps - want).abs() < 1e-12, "eps = {}", sol.eps);
    assert!(sol.residual_nr.unwrap() <= 1e-10, "W residual {}", sol.residual_nr.unwrap());

    // independent finite-difference value of the same eigenvalue
    let grid = RadialGrid::from_step(1e-3, 12.0, 1e-3).unwrap();
    let u = move |r: f64| 2.0 * m * pair.scalar(r);
    let fd = oracle::schrodinger_fd(u, &grid, 1).unwrap();
    assert!((fd.eigenvalues[0] - want).abs() <= 5e-4, "oracle gap {}", (fd.eigenvalues[0] - want).abs());

    // pure oscillator
    let osc = PowerSeriesPair::scalar_only(0.0, 0.0, 1.0);
    let eps = coulombic::nonrel_energy(0, m, 0.0, &osc).unwrap();
    assert!((eps - 3.0).abs() < 1e-12);
    let fd = oracle::schrodinger_fd(|r| r * r, &grid, 1).unwrap();
    assert!((fd.eigenvalues[0] - 3.0).abs() <= 2e-4, "oscillator gap {}", (fd.eigenvalues[0] - 3.0).abs());
    out.pass();
}

#[test]
fn criterion_06_perturbation_engine_exactness() {
    let out = Outcome::start("criterion-06 perturbation engine oscillator exactness");
    // fine spacing: the tail integral's O(h^2) error divided by chi^2 grows
    // with r, and the pointwise Delta-W check extends to r = 6
    let grid = RadialGrid::from_step(1e-3, 12.0, 1e-4).unwrap();
    let m = 0.5;
    let chi: Vec<f64> = grid.nodes().iter().map(|&r| r * (-r * r / 2.0).exp()).collect();
    let source: Vec<f64> = grid.nodes().iter().map(|&r| r * r).collect();
    let series = perturb::run_series_sources(&chi, &[source], 3, m, &grid).unwrap();

    let want = [1.5, -0.375, 0.1875];
    for (order, w) in series.orders.iter().zip(want) {
        assert!(
            (order.deps - w).abs() < 1e-6,
            "order {}: {} vs {w}",
            order.k,
            order.deps
        );
    }
    // the partial sums reproduce the exact family 3*sqrt(1+lambda)
    for &lambda in &[0.05_f64, 0.1, 0.2] {
        let exact = 3.0 * (1.0 + lambda).sqrt() - 3.0;
        let approx = series.energy_correction(lambda);
        // truncation starts at -15/128 * lambda^4
        assert!(
            (exact - approx).abs() < 0.2 * lambda.powi(4) + 2e-6,
            "lambda {lambda}: {exact} vs {approx}"
        );
    }
    for (i, &r) in grid.nodes().iter().enumerate() {
        if (0.1..=6.0).contains(&r) {
            assert!(
                (series.orders[0].d_w[i] - r / 2.0).abs() < 1e-6,
                "dW1({r}) = {}",
                series.orders[0].d_w[i]
            );
        }
    }
    out.pass();
}

#[test]
fn criterion_07_order_scaling_property() {
    let out = Outcome::start("criterion-07 order-scaling of the truncation error");
    let m = 0.5;
    // perturbing pair with small coefficients on the oscillator base
    let pert = PowerSeriesPair::scalar_only(0.0, 0.42, 0.14);
    let lambdas = [0.02, 0.04, 0.08, 0.16];

    // series on the analytic base state
    let qgrid = RadialGrid::from_step(1e-3, 12.0, 1e-3).unwrap();
    let chi: Vec<f64> = qgrid.nodes().iter().map(|&r| r * (-r * r / 2.0).exp()).collect();
    let source: Vec<f64> = qgrid.nodes().iter().map(|&r| perturb::delta_v_eval(&pert, r)).collect();
    let series = perturb::run_series_sources(&chi, &[source], 3, m, &qgrid).unwrap();

    // reference shifts by Richardson-extrapolated finite differences
    let eps_at = |lambda: f64, h: f64| {
        let grid = RadialGrid::from_step(h, 12.0, h).unwrap();
        let u = move |r: f64| r * r + lambda * perturb::delta_v_eval(&pert, r);
        oracle::schrodinger_fd(u, &grid, 1).unwrap().eigenvalues[0]
    };
    let eps_exact = |lambda: f64| {
        let e1 = eps_at(lambda, 8e-3);
        let e2 = eps_at(lambda, 4e-3);
        let e3 = eps_at(lambda, 2e-3);
        let r1 = (4.0 * e2 - e1) / 3.0;
        let r2 = (4.0 * e3 - e2) / 3.0;
        (16.0 * r2 - r1) / 15.0
    };
    let base = eps_exact(0.0);
    let shifts: Vec<f64> = lambdas.iter().map(|&l| eps_exact(l) - base).collect();

    for k in 1..=3usize {
        let points: Vec<(f64, f64)> = lambdas
            .iter()
            .zip(&shifts)
            .map(|(&l, &shift)| {
                let partial = series.energy_correction_through(l, k);
                (l.ln(), (shift - partial).abs().ln())
            })
            .collect();
        // least-squares slope of ln|error| vs ln(lambda)
        let n = points.len() as f64;
        let sx: f64 = points.iter().map(|p| p.0).sum();
        let sy: f64 = points.iter().map(|p| p.1).sum();
        let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!(
            slope >= k as f64 + 0.7,
            "order {k}: log-log slope {slope} below {}",
            k as f64 + 0.7
        );
    }
    out.pass();
}

#[test]
fn criterion_08_degeneracy_sentinels() {
    let out = Outcome::start("criterion-08 degeneracy sentinels");
    // equal couplings in the closed-form path: no correction, flat phi
    let pair = HulthenPair::new(0.75, 0.75, 1.0).unwrap();
    let sol = hulthen::solve_ground_on(1.0, &pair, None).unwrap();
    assert_eq!(sol.delta, 0.0);
    assert!(sol.deps.abs() < 1e-12);
    let phi = sol.phi_form();
    for &r in &[0.1, 1.0, 5.0, 20.0] {
        assert!((phi.eval(r) - 1.0).abs() < 1e-12, "phi({r}) = {}", phi.eval(r));
    }

    // equal couplings in the engine path: null series
    let grid = RadialGrid::from_step(1e-3, 12.0, 1e-3).unwrap();
    let chi: Vec<f64> = grid.nodes().iter().map(|&r| r * (-r * r / 2.0).exp()).collect();
    let w = riccati::Superpotential::new("osc", |r: f64| -1.0 / r + r, |r| 1.0 / (r * r) + 1.0);
    let eq = PowerSeriesPair::new(0.0, 0.3, 0.2, 0.0, 0.3, 0.2).unwrap();
    let series = perturb::run_series(&chi, &w, &eq, 3, 0.5, &grid).unwrap();
    for order in &series.orders {
        assert_eq!(order.deps, 0.0);
        assert!(order.d_w.iter().all(|&x| x == 0.0));
    }
    let phi = perturb::corrected_wavefunction(&series, 0.5, 0.7).unwrap();
    assert!(phi.iter().all(|&x| x == 1.0));

    // delta = 0 exactly iff s0^2 = v0^2
    assert_eq!(hulthen::delta(1.3, 0.7, 0.5, -0.5).unwrap(), 0.0);
    assert_eq!(hulthen::delta(1.3, 0.7, 0.5, 0.5).unwrap(), 0.0);
    assert!(hulthen::delta(1.3, 0.7, 0.5, 0.3).unwrap() > 0.0);

    // threshold coupling: typed NoBoundState
    let err = hulthen::nonrel_ground(1.0, 1.0, 0.5).unwrap_err();
    assert!(matches!(err, Error::NoBoundState(_)), "got {err:?}");
    out.pass();
}

#[test]
fn criterion_09_oracle_self_validation() {
    let out = Outcome::start("criterion-09 oracle self-validation on textbook problems");
    use std::f64::consts::PI;

    // particle in a box
    let grid = RadialGrid::from_step(1e-2, 1.0 - 1e-2, 1e-2).unwrap();
    let res = oracle::schrodinger_fd(|_| 0.0, &grid, 1).unwrap();
    assert!((res.eigenvalues[0] / (PI * PI) - 1.0).abs() < 1e-3);

    // oscillator
    let grid = RadialGrid::from_step(1e-3, 12.0, 1e-3).unwrap();
    let res = oracle::schrodinger_fd(|r| r * r, &grid, 1).unwrap();
    assert!((res.eigenvalues[0] - 3.0).abs() < 2e-4);

    // Coulomb -1/r ground state
    let grid = RadialGrid::from_step(1e-3, 40.0, 1e-3).unwrap();
    let res = oracle::schrodinger_fd(|r| -1.0 / r, &grid, 1).unwrap();
    assert!((res.eigenvalues[0] + 0.25).abs() < 2e-4);

    // tridiagonal Laplacian eigenvalues
    let n = 1000;
    let sys = oracle::TridiagonalSystem::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap();
    let res = oracle::eigen_smallest(&sys, 3).unwrap();
    for (j, got) in res.eigenvalues.iter().enumerate() {
        let want = 4.0 * (PI * (j + 1) as f64 / (2.0 * (n + 1) as f64)).sin().powi(2);
        assert!((got - want).abs() < 1e-11);
    }

    // O(h^2) convergence of the oscillator eigenvalue
    let eps_at = |h: f64| {
        let grid = RadialGrid::from_step(h, 12.0, h).unwrap();
        oracle::schrodinger_fd(|r| r * r, &grid, 1).unwrap().eigenvalues[0]
    };
    let ratio = (eps_at(4e-3) - 3.0) / (eps_at(2e-3) - 3.0);
    assert!((3.6..=4.4).contains(&ratio), "convergence ratio {ratio}");
    out.pass();
}

#[test]
fn criterion_10_cli_determinism_and_exit_codes() {
    let out = Outcome::start("criterion-10 CLI determinism and exit codes");
    let bin = env!("CARGO_BIN_EXE_kgdecomp");
    let run = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .env_remove("KGDECOMP_GRID_SCALE")
            .output()
            .expect("binary runs")
    };

    // byte-identical repeated invocations
    let args = ["hulthen", "--m", "1", "--alpha", "1", "--s0", "1.25", "--v0", "0.75"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stderr, second.stderr);

    // exit 0: documented success example
    let text = String::from_utf8(first.stdout).unwrap();
    assert!(text.contains("0.5609756097560976"), "missing energy in {text}");

    // exit 2: invalid arguments
    let bad = run(&["hulthen", "--m", "1", "--alpha", "1", "--s0", "1.25", "--bogus"]);
    assert_eq!(bad.status.code(), Some(2));

    // exit 3: typed solver error
    let nb = run(&["hulthen", "--m", "1", "--alpha", "1", "--s0", "0.1", "--v0", "0"]);
    assert_eq!(nb.status.code(), Some(3));
    let stderr = String::from_utf8(nb.stderr).unwrap();
    assert!(stderr.contains("\"NoBoundState\""), "stderr: {stderr}");

    // exit 4: verification failure on a deliberately coarse grid
    let vf = run(&["verify", "--h", "0.05"]);
    assert_eq!(vf.status.code(), Some(4));

    // quick verify passes
    let vq = run(&["verify", "--quick"]);
    assert_eq!(vq.status.code(), Some(0));
    out.pass();
}
