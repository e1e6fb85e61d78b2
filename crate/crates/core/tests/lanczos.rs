use lanczos_core::arith::norm2;
use lanczos_core::lanczos::{lanczos, lanczos_apply, orthogonality_defect, three_term_residual};
use lanczos_core::linalg::ExactOracle;
use lanczos_core::random::{gaussian_vector, rng, symmetric_with_spectrum, uniform_vector};
use lanczos_core::{apply_function, ScalarFunction, SymmetricOperator};
use proptest::prelude::*;

fn random_case(n: usize, seed: u64) -> (SymmetricOperator, Vec<f64>) {
    let mut r = rng(seed);
    let eig = uniform_vector(&mut r, n, -1.0, 1.0);
    let a = symmetric_with_spectrum(&mut r, &eig).unwrap();
    (a, gaussian_vector(&mut r, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn residual_within_double_precision_bound(n in 4usize..40, k in 1usize..20, seed in any::<u64>()) {
        let k = k.min(n);
        let (a, x) = random_case(n, seed);
        let dec = lanczos(&a, &x, k).unwrap();
        let nf = n as f64;
        let bound = k as f64 * (2.0 * nf.powf(1.5) + 7.0) * a.norm_bound() * f64::EPSILON;
        prop_assert!(three_term_residual(&dec, &a).unwrap() <= bound);
        prop_assert!(dec.steps_taken <= k.min(n));
        prop_assert!((dec.x_norm - norm2(&x)).abs() <= 1e-14 * norm2(&x));
    }

    #[test]
    fn ritz_values_lie_in_spectral_interval(n in 2usize..30, k in 1usize..15, seed in any::<u64>()) {
        let (a, x) = random_case(n, seed);
        let dec = lanczos(&a, &x, k).unwrap();
        let oracle = ExactOracle::new(&a).unwrap();
        let ritz = dec.ritz_values().unwrap();
        prop_assert!(ritz[0] >= oracle.lambda_min() - 1e-10);
        prop_assert!(*ritz.last().unwrap() <= oracle.lambda_max() + 1e-10);
    }

    #[test]
    fn polynomials_below_k_are_exact(n in 6usize..30, seed in any::<u64>(), c in prop::collection::vec(-1.0f64..1.0, 1..6)) {
        let (a, x) = random_case(n, seed);
        let k = c.len() + 1;
        let coeffs = c.clone();
        let f = ScalarFunction::from_fn("poly", move |t| coeffs.iter().rev().fold(0.0, |acc, ci| acc * t + ci));
        let dec = lanczos(&a, &x, k).unwrap();
        let y = apply_function(&dec, &f, dec.x_norm).unwrap();
        let exact = ExactOracle::new(&a).unwrap().apply(&f, &x).unwrap();
        let err: Vec<f64> = y.iter().zip(&exact).map(|(u, v)| u - v).collect();
        let scale: f64 = c.iter().map(|v| v.abs()).sum::<f64>() * norm2(&x);
        prop_assert!(norm2(&err) <= 1e-11 * scale.max(1e-300));
    }

    #[test]
    fn breakdown_at_invariant_subspace(distinct in 1usize..6, copies in 2usize..5, seed in any::<u64>()) {
        let vals: Vec<f64> = (0..distinct).flat_map(|i| std::iter::repeat_n((i + 1) as f64, copies)).collect();
        let n = vals.len();
        let a = SymmetricOperator::diagonal(vals).unwrap();
        let x = gaussian_vector(&mut rng(seed), n);
        let dec = lanczos(&a, &x, n).unwrap();
        prop_assert_eq!(dec.steps_taken, distinct);
        prop_assert!(dec.breakdown || distinct == n);
        let y = lanczos_apply(&a, &ScalarFunction::sqrt(), &x, n).unwrap();
        let exact = ExactOracle::new(&a).unwrap().apply(&ScalarFunction::sqrt(), &x).unwrap();
        let err: Vec<f64> = y.iter().zip(&exact).map(|(u, v)| u - v).collect();
        prop_assert!(norm2(&err) <= 1e-12 * norm2(&x) * n as f64);
    }
}

#[test]
fn well_separated_spectrum_keeps_orthogonality() {
    let vals: Vec<f64> = (0..100).map(|i| 1.0 + i as f64).collect();
    let a = SymmetricOperator::diagonal(vals).unwrap();
    let x = gaussian_vector(&mut rng(3), 100);
    let dec = lanczos(&a, &x, 30).unwrap();
    assert!(orthogonality_defect(&dec) <= 1e-8);
}

#[test]
fn separated_spectrum_terminates_by_step_n() {
    for n in [3, 8, 12] {
        let vals: Vec<f64> = (1..=n).map(|i| i as f64).collect();
        let a = SymmetricOperator::diagonal(vals).unwrap();
        let x = vec![1.0; n];
        let dec = lanczos(&a, &x, n + 5).unwrap();
        assert!(dec.breakdown, "n = {n}");
        assert_eq!(dec.steps_taken, n);
    }
}

#[test]
fn rejects_wrong_dimension() {
    let a = SymmetricOperator::identity(3).unwrap();
    assert!(lanczos(&a, &[1.0, 2.0], 2).is_err());
    assert!(lanczos(&a, &[0.0, 0.0, 0.0], 2).is_err());
}
