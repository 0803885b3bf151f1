//! Property-based invariants over randomized inputs.

use proptest::prelude::*;

use kgdecomp::grid::RadialGrid;
use kgdecomp::hulthen;
use kgdecomp::potentials::{self, HulthenPair, PhysParams, PotentialSpec, PowerSeriesPair};
use kgdecomp::riccati;

fn finite_coeff() -> impl Strategy<Value = f64> {
    -3.0..3.0_f64
}

proptest! {
    /// S² − V² from the strength helper equals the pointwise difference of
    /// squares for any power-series pair.
    #[test]
    fn rel_strength_matches_difference_of_squares(
        s0 in finite_coeff(), s1 in finite_coeff(), s2 in finite_coeff(),
        v0 in finite_coeff(), v1 in finite_coeff(), v2 in finite_coeff(),
        r in 0.05..10.0_f64,
    ) {
        let pair = PowerSeriesPair::new(s0, s1, s2, v0, v1, v2).unwrap();
        let spec = PotentialSpec::PowerSeries(pair);
        let got = potentials::rel_strength(&spec, r).unwrap();
        let want = pair.scalar(r).powi(2) - pair.vector(r).powi(2);
        let scale = pair.scalar(r).powi(2).max(pair.vector(r).powi(2)).max(1.0);
        prop_assert!((got - want).abs() <= 1e-12 * scale);
    }

    /// U = 2(mS + EV) is affine in E: the midpoint value is the average of
    /// the endpoint values.
    #[test]
    fn nonrel_strength_is_affine_in_energy(
        s0 in 0.1..2.0_f64,
        v0 in -1.5..1.5_f64,
        alpha in 0.3..2.0_f64,
        m in 0.3..2.0_f64,
        e1 in -2.0..2.0_f64,
        e2 in -2.0..2.0_f64,
        r in 0.05..10.0_f64,
    ) {
        let spec = PotentialSpec::Hulthen(HulthenPair::new(s0, v0, alpha).unwrap());
        let params = PhysParams::new(m).unwrap();
        let a = potentials::nonrel_strength(&spec, params, e1, r).unwrap();
        let b = potentials::nonrel_strength(&spec, params, e2, r).unwrap();
        let mid = potentials::nonrel_strength(&spec, params, 0.5 * (e1 + e2), r).unwrap();
        let scale = a.abs().max(b.abs()).max(1.0);
        prop_assert!((mid - 0.5 * (a + b)).abs() <= 1e-12 * scale);
    }

    /// The two printed forms of the correction energy agree for any
    /// admissible parameters.
    #[test]
    fn hulthen_correction_forms_agree(
        m in 0.3..2.0_f64,
        alpha in 0.3..2.0_f64,
        u0_excess in 0.01..3.0_f64,
        delta in 0.0..4.0_f64,
    ) {
        let u0 = alpha * alpha / (2.0 * m) + u0_excess;
        let (deps, _) = hulthen::rel_correction(m, alpha, u0, delta);
        let expanded = hulthen::rel_correction_expanded(m, alpha, u0, delta);
        let scale = deps.abs().max(expanded.abs()).max(1.0);
        prop_assert!((deps - expanded).abs() <= 1e-11 * scale);
    }

    /// delta is the non-negative root of delta(delta+1) = 2m(s0²−v0²)/alpha².
    #[test]
    fn delta_solves_its_quadratic(
        m in 0.3..2.0_f64,
        alpha in 0.3..2.0_f64,
        s0 in 0.05..2.0_f64,
        frac in -0.99..0.99_f64,
    ) {
        let v0 = s0 * frac;
        let d = hulthen::delta(m, alpha, s0, v0).unwrap();
        prop_assert!(d >= 0.0);
        let lhs = d * (d + 1.0) * alpha * alpha / (2.0 * m);
        let rhs = s0 * s0 - v0 * v0;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }

    /// The cumulative trapezoid ends at the total integral.
    #[test]
    fn cumtrapz_is_consistent_with_trapz(
        samples in proptest::collection::vec(-5.0..5.0_f64, 3..200),
        r_min in 0.01..1.0_f64,
        span in 0.5..20.0_f64,
    ) {
        let grid = RadialGrid::new(r_min, r_min + span, samples.len()).unwrap();
        let cum = grid.cumtrapz(&samples);
        let total = grid.trapz(&samples);
        prop_assert!((cum[cum.len() - 1] - total).abs() <= 1e-10 * total.abs().max(1.0));
    }

    /// Combined wavefunctions never exceed max-abs 1.
    #[test]
    fn combine_respects_rescaling(
        chi in proptest::collection::vec(-10.0..10.0_f64, 1..100),
    ) {
        let phi: Vec<f64> = chi.iter().map(|&x| (x * 0.37).cos()).collect();
        let psi = riccati::combine(&chi, &phi).unwrap();
        let max = psi.iter().fold(0.0_f64, |a, &x| a.max(x.abs()));
        prop_assert!(max <= 1.0 + 1e-15);
        prop_assert!(psi.len() == chi.len());
    }
}
