use lanczos_core::arith::norm2;
use lanczos_core::cg::{a_norm, anorm_optimality_check, cg_solve, lanczos_cg_equivalence};
use lanczos_core::linalg::ExactOracle;
use lanczos_core::random::{gaussian_vector, random_spd, rng};
use lanczos_core::{ScalarFunction, SymmetricOperator};
use proptest::prelude::*;

fn error_anorm(a: &SymmetricOperator, exact: &[f64], y: &[f64]) -> f64 {
    let e: Vec<f64> = exact.iter().zip(y).map(|(u, v)| u - v).collect();
    a_norm(a, &e).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn anorm_error_is_monotone(n in 4usize..30, kappa in 2.0f64..100.0, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_spd(&mut r, n, kappa).unwrap();
        let b = gaussian_vector(&mut r, n);
        let exact = ExactOracle::new(&a).unwrap().apply(&ScalarFunction::inverse(), &b).unwrap();
        let trace = cg_solve(&a, &b, n, 0.0).unwrap();
        let errs: Vec<f64> = trace.iterates.iter().map(|y| error_anorm(&a, &exact, y)).collect();
        let start = a_norm(&a, &exact).unwrap();
        let mut prev = start;
        for e in errs {
            prop_assert!(e <= prev * (1.0 + 1e-8) + 1e-12 * start);
            prev = e;
        }
    }

    #[test]
    fn cg_beats_sampled_krylov_polynomials(n in 4usize..20, k in 1usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_spd(&mut r, n, 50.0).unwrap();
        let b = gaussian_vector(&mut r, n);
        prop_assert!(anorm_optimality_check(&a, &b, k, 40, seed).unwrap());
    }

    #[test]
    fn cg_and_lanczos_agree(n in 4usize..30, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_spd(&mut r, n, 20.0).unwrap();
        let b = gaussian_vector(&mut r, n);
        let k = (n / 2).max(1);
        prop_assert!(lanczos_cg_equivalence(&a, &b, k).unwrap() <= 1e-9);
    }

    #[test]
    fn recorded_residuals_match_recomputed(n in 4usize..20, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_spd(&mut r, n, 10.0).unwrap();
        let b = gaussian_vector(&mut r, n);
        let trace = cg_solve(&a, &b, n / 2, 0.0).unwrap();
        for (y, recorded) in trace.iterates.iter().zip(&trace.residual_norms[1..]) {
            let ay = a.matvec(y).unwrap();
            let res: Vec<f64> = b.iter().zip(&ay).map(|(u, v)| u - v).collect();
            prop_assert!((norm2(&res) - recorded).abs() <= 1e-10 * norm2(&b));
        }
    }
}

#[test]
fn residual_history_starts_at_b() {
    let a = SymmetricOperator::diagonal(vec![1.0, 3.0, 7.0]).unwrap();
    let b = [1.0, -2.0, 2.0];
    let trace = cg_solve(&a, &b, 3, 0.0).unwrap();
    assert_eq!(trace.residual_norms[0], 3.0);
    assert!(trace.residual_norms.last().unwrap() <= &1e-12);
}

#[test]
fn stop_tolerance_ends_early() {
    let mut r = rng(1);
    let a = random_spd(&mut r, 40, 4.0).unwrap();
    let b = gaussian_vector(&mut r, 40);
    let trace = cg_solve(&a, &b, 40, 1e-6).unwrap();
    assert!(trace.iterations() < 40);
    assert!(*trace.residual_norms.last().unwrap() <= 1e-6 * norm2(&b));
}

#[test]
fn indefinite_matrix_reports_curvature() {
    let a = SymmetricOperator::diagonal(vec![1.0, -1.0]).unwrap();
    let e = cg_solve(&a, &[1.0, 1.0], 2, 0.0).unwrap_err();
    assert_eq!(e.kind(), "nonpositive-curvature");
}
