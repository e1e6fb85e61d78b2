use lanczos_core::arith::norm2;
use lanczos_core::linalg::{parse_matrix_market, spectral_range, symmetric_eigen, ExactOracle};
use lanczos_core::random::{gaussian_vector, rng, symmetric_with_spectrum, uniform_vector};
use lanczos_core::{DenseMatrix, Error, ScalarFunction, SymmetricOperator};
use proptest::prelude::*;

fn random_case(n: usize, seed: u64) -> (SymmetricOperator, Vec<f64>, Vec<f64>) {
    let mut r = rng(seed);
    let mut eig = uniform_vector(&mut r, n, -2.0, 2.0);
    let a = symmetric_with_spectrum(&mut r, &eig).unwrap();
    let v = gaussian_vector(&mut r, n);
    eig.sort_by(f64::total_cmp);
    (a, v, eig)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matvec_respects_norm_bound(n in 1usize..24, seed in any::<u64>()) {
        let (a, v, eig) = random_case(n, seed);
        let av = a.matvec(&v).unwrap();
        let exact_norm = eig.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        prop_assert!(a.norm_bound() >= exact_norm * (1.0 - 1e-12));
        prop_assert!(norm2(&av) <= a.norm_bound() * norm2(&v) * (1.0 + 1e-12));
    }

    #[test]
    fn sparse_and_dense_storage_agree(n in 1usize..16, seed in any::<u64>()) {
        let (a, v, _) = random_case(n, seed);
        let dense = a.materialize();
        let mut triplets = Vec::new();
        for i in 0..n {
            for j in 0..=i {
                triplets.push((i, j, dense[(i, j)]));
            }
        }
        let sparse = SymmetricOperator::from_lower_triplets(n, &triplets).unwrap();
        let x = sparse.matvec(&v).unwrap();
        let y = dense.matvec(&v).unwrap();
        for (p, q) in x.iter().zip(&y) {
            prop_assert!((p - q).abs() <= 1e-12 * (1.0 + q.abs()) * n as f64);
        }
    }

    #[test]
    fn eigen_reconstructs_and_matches_construction(n in 1usize..20, seed in any::<u64>()) {
        let (a, _, eig) = random_case(n, seed);
        let dense = a.materialize();
        let e = symmetric_eigen(&dense).unwrap();
        let back = e.reconstruct().sub(&dense).unwrap().frobenius_norm();
        prop_assert!(back <= 1e-12 * n as f64 * dense.frobenius_norm().max(1.0));
        prop_assert!(e.gram_defect().frobenius_norm() <= 1e-12 * n as f64);
        for (got, want) in e.values.iter().zip(&eig) {
            prop_assert!((got - want).abs() <= 1e-11);
        }
    }

    #[test]
    fn full_probe_range_contains_spectrum(n in 2usize..20, seed in any::<u64>(), margin in 0.0f64..0.2) {
        let (a, _, eig) = random_case(n, seed);
        let (lo, hi) = spectral_range(&a, n, margin).unwrap();
        prop_assert!(lo <= eig[0] + 1e-10);
        prop_assert!(hi >= eig[n - 1] - 1e-10);
    }

    #[test]
    fn oracle_identity_and_square(n in 1usize..16, seed in any::<u64>()) {
        let (a, v, _) = random_case(n, seed);
        let oracle = ExactOracle::new(&a).unwrap();
        let id = oracle.apply(&ScalarFunction::identity(), &v).unwrap();
        let av = a.matvec(&v).unwrap();
        let a2v = a.matvec(&av).unwrap();
        let sq = oracle.apply(&ScalarFunction::square(), &v).unwrap();
        for i in 0..n {
            prop_assert!((id[i] - av[i]).abs() <= 1e-12 * 4.0 * norm2(&v) * n as f64);
            prop_assert!((sq[i] - a2v[i]).abs() <= 1e-12 * 16.0 * norm2(&v) * n as f64);
        }
    }
}

#[test]
fn spectral_norm_of_rectangular_matrix() {
    let b = DenseMatrix::from_rows(&[vec![3.0, 0.0], vec![0.0, 4.0], vec![0.0, 0.0]]).unwrap();
    assert!((b.spectral_norm().unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn matrix_market_coordinate_symmetric() {
    let a = parse_matrix_market(
        "%%MatrixMarket matrix coordinate real symmetric\n% comment\n\n3 3 3\n1 1 2.0\n3 1 -1\n2 2 5e-1\n",
    )
    .unwrap();
    let d = a.materialize();
    assert_eq!(d[(0, 0)], 2.0);
    assert_eq!(d[(0, 2)], -1.0);
    assert_eq!(d[(2, 0)], -1.0);
    assert_eq!(d[(1, 1)], 0.5);
    assert_eq!(d[(2, 2)], 0.0);
}

#[test]
fn matrix_market_array_symmetric_fills_lower_columns() {
    let a = parse_matrix_market("%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n").unwrap();
    let d = a.materialize();
    assert_eq!((d[(0, 0)], d[(1, 0)], d[(0, 1)], d[(1, 1)]), (1.0, 2.0, 2.0, 3.0));
}

#[test]
fn matrix_market_general_must_be_symmetric() {
    let ok = parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 1\n2 1 1\n");
    assert!(ok.is_ok());
    let bad = parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 1\n");
    assert!(matches!(bad, Err(Error::Structural(_))));
}

#[test]
fn matrix_market_errors_carry_line_numbers() {
    let cases = [
        ("", 1),
        ("%%MatrixMarket matrix coordinate real symmetric\n2 2\n", 2),
        ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 1\n", 3),
        ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1 x\n", 3),
        (
            "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1 1\n2 2 1\n",
            4,
        ),
        ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 1\n", 3),
    ];
    for (text, want) in cases {
        match parse_matrix_market(text) {
            Err(Error::Malformed { line, .. }) => assert_eq!(line, want, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
}

#[test]
fn matrix_market_rejects_unsupported_and_rectangular() {
    let complex = parse_matrix_market("%%MatrixMarket matrix coordinate complex symmetric\n1 1 1\n1 1 1 0\n");
    assert!(matches!(complex, Err(Error::Unsupported(_))));
    let rect = parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 3 0\n");
    assert!(matches!(rect, Err(Error::Structural(_))));
}

#[test]
fn matrix_market_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.mtx");
    std::fs::write(
        &path,
        "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 4\n2 2 9\n",
    )
    .unwrap();
    let a = lanczos_core::linalg::load_matrix_market(&path).unwrap();
    assert_eq!(a.matvec(&[1.0, 1.0]).unwrap(), vec![4.0, 9.0]);
    assert!(lanczos_core::linalg::load_matrix_market(dir.path().join("none.mtx")).is_err());
}
