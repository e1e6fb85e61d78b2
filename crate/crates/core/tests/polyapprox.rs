use lanczos_core::polyapprox::{cheb_interpolate, cheb_t, cheb_u, minimax, ChebyshevExpansion, IntervalUnion};
use lanczos_core::{Execution, ScalarFunction};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chebyshev_magnitudes_on_reference_interval(i in 0usize..60, x in -1.0f64..=1.0) {
        prop_assert!(cheb_t(i, x).abs() <= 1.0 + 1e-12);
        prop_assert!(cheb_u(i as isize, x).abs() <= (i + 1) as f64 * (1.0 + 1e-12));
    }

    #[test]
    fn chebyshev_matches_trigonometric_form(i in 0usize..40, theta in 0.0f64..std::f64::consts::PI) {
        let x = theta.cos();
        prop_assert!((cheb_t(i, x) - (i as f64 * theta).cos()).abs() <= 1e-12 * (i + 1) as f64);
    }

    #[test]
    fn clenshaw_agrees_with_direct_sum(c in prop::collection::vec(-1.0f64..1.0, 1..30), t in -1.0f64..=1.0) {
        let e = ChebyshevExpansion::new((2.0, 5.0), c).unwrap();
        let x = 3.5 + 1.5 * t;
        prop_assert!((e.eval(x) - e.eval_direct(x)).abs() <= 1e-13 * e.abs_sum() * 30.0);
    }

    #[test]
    fn interpolant_coefficients_bounded_by_twice_sup(d in 1usize..40, shift in 0.0f64..2.0) {
        let f = ScalarFunction::from_fn("abs-shift", move |x: f64| (x - shift + 1.0).abs());
        let e = cheb_interpolate(&f, (-1.0, 1.0), d).unwrap();
        let sup = f.sampled_sup(-1.0, 1.0).unwrap();
        prop_assert!(e.coeffs().iter().all(|c| c.abs() <= 2.0 * sup * (1.0 + 1e-12)));
    }

    #[test]
    fn minimax_reproduces_low_degree_polynomials(c in prop::collection::vec(-1.0f64..1.0, 1..5)) {
        let coeffs = c.clone();
        let f = ScalarFunction::from_fn("poly", move |x| coeffs.iter().rev().fold(0.0, |acc, ci| acc * x + ci));
        let domain = IntervalUnion::new(vec![(0.1, 0.4), (0.6, 1.0)], 32).unwrap();
        let r = minimax(&f, &domain, c.len() - 1, None).unwrap();
        prop_assert!(r.delta <= 1e-9);
    }

    #[test]
    fn minimax_error_dominates_chebyshev_error(d in 0usize..10) {
        let f = ScalarFunction::exp();
        let domain = IntervalUnion::new(vec![(-1.0, 1.0)], 64).unwrap();
        let best = minimax(&f, &domain, d, None).unwrap();
        let cheb = cheb_interpolate(&f, (-1.0, 1.0), d).unwrap();
        let cheb_err = best.grid.iter().map(|&x| (cheb.eval(x) - x.exp()).abs()).fold(0.0, f64::max);
        prop_assert!(best.delta <= cheb_err * (1.0 + 1e-9) + 1e-14);
        let actual = best.grid.iter().map(|&x| (best.expansion.eval(x) - x.exp()).abs()).fold(0.0, f64::max);
        prop_assert!((actual - best.delta).abs() <= 1e-12);
    }
}

#[test]
fn minimax_error_nonincreasing_in_degree() {
    let f = ScalarFunction::inverse();
    let domain = IntervalUnion::new(vec![(0.05, 0.2), (0.5, 1.0)], 64).unwrap();
    let deltas: Vec<f64> = (0..12).map(|d| minimax(&f, &domain, d, None).unwrap().delta).collect();
    for w in deltas.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-9), "{deltas:?}");
    }
}

#[test]
fn single_interval_error_equioscillates() {
    let f = ScalarFunction::inverse();
    let domain = IntervalUnion::single(0.1, 1.0).unwrap();
    for d in 1..6 {
        let r = minimax(&f, &domain, d, None).unwrap();
        let errs: Vec<f64> = r.grid.iter().map(|&x| r.expansion.eval(x) - 1.0 / x).collect();
        let mut sign = 0.0;
        let mut alternations = 0;
        for e in errs {
            if e.abs() >= r.delta * (1.0 - 1e-6) && e.signum() != sign {
                alternations += 1;
                sign = e.signum();
            }
        }
        assert!(alternations >= d + 2, "degree {d}: {alternations} alternations");
    }
}

#[test]
fn constraint_at_zero_is_honoured_and_costs_accuracy() {
    let f = ScalarFunction::from_fn("sqrt+1", |x: f64| x.sqrt() + 1.0);
    let domain = IntervalUnion::single(0.25, 1.0).unwrap();
    let free = minimax(&f, &domain, 3, None).unwrap();
    let tied = minimax(&f, &domain, 3, Some(0.0)).unwrap();
    assert!(tied.expansion.eval(0.0).abs() <= 1e-9);
    assert!(tied.delta >= free.delta * (1.0 - 1e-9));
}

#[test]
fn degree_grows_with_condition_number() {
    let f = ScalarFunction::inverse();
    let k: Vec<usize> = [10.0, 40.0, 160.0]
        .iter()
        .map(|&kappa| {
            let d = IntervalUnion::single(1.0 / kappa, 1.0).unwrap();
            lanczos_core::polyapprox::min_degree_for(&f, &d, 1.0 / 6.0, 200, None, Execution::Sequential)
                .unwrap()
                .unwrap()
        })
        .collect();
    assert!(k[0] < k[1] && k[1] < k[2], "{k:?}");
    for (kappa, degree) in [10.0f64, 40.0, 160.0].iter().zip(&k) {
        let shape = *degree as f64 / kappa.sqrt();
        let first = k[0] as f64 / 10f64.sqrt();
        assert!(shape / first < 3.0 && first / shape < 3.0, "{k:?}");
    }
}
