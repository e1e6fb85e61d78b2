//! Seeded random instances.
//!
//! One 64-bit master seed drives every experiment. Trial `i` uses the stream
//! seed `splitmix64(master + (i + 1)·0x9E3779B97F4A7C15)`, so trials can run in
//! any order or in parallel and still see the same numbers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::dense::{orthonormalize_columns, DenseMatrix};
use crate::linalg::operator::SymmetricOperator;

pub type SeededRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of stream `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn trial_rng(master: u64, index: u64) -> SeededRng {
    rng(derive_seed(master, index))
}

pub fn gaussian_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Entries independently `+1` or `−1` with probability 1/2.
pub fn sign_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect()
}

pub fn uniform_vector(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..=hi)).collect()
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_row_major(rows, cols, gaussian_vector(rng, rows * cols)).expect("sized data")
}

/// Orthogonal matrix from the QR factor of a Gaussian matrix.
pub fn random_orthogonal(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    loop {
        if let Ok(q) = orthonormalize_columns(&gaussian_matrix(rng, n, n)) {
            return q;
        }
    }
}

/// Dense `Q diag(λ) Qᵀ` for a random orthogonal `Q`, with norm hint `max |λ|`.
pub fn symmetric_with_spectrum(rng: &mut impl Rng, eigenvalues: &[f64]) -> Result<SymmetricOperator> {
    let n = eigenvalues.len();
    if n == 0 {
        return Err(Error::Structural("operator dimension must be positive".into()));
    }
    let q = random_orthogonal(rng, n);
    let mut a = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v: f64 = (0..n).map(|l| q[(i, l)] * eigenvalues[l] * q[(j, l)]).sum();
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    let hint = eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(SymmetricOperator::from_dense(&a)?.with_norm_hint(hint))
}

/// `n` values log-spaced from `1/κ` to `1`.
pub fn log_spaced_spectrum(n: usize, kappa: f64) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    (0..n).map(|i| kappa.powf(-1.0 + i as f64 / (n - 1) as f64)).collect()
}

/// Positive definite operator with log-spaced spectrum in `[1/κ, 1]`.
pub fn random_spd(rng: &mut impl Rng, n: usize, kappa: f64) -> Result<SymmetricOperator> {
    if !(kappa >= 1.0) {
        return Err(Error::Domain(format!("condition number {kappa} must be at least 1")));
    }
    symmetric_with_spectrum(rng, &log_spaced_spectrum(n, kappa))
}

/// Symmetric operator with uniform spectrum in `[−norm, norm]`, scaled so the
/// extreme eigenvalue has magnitude exactly `norm`.
pub fn random_symmetric(rng: &mut impl Rng, n: usize, norm: f64) -> Result<SymmetricOperator> {
    let mut eig = uniform_vector(rng, n, -1.0, 1.0);
    let top = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    eig.iter_mut().for_each(|v| *v *= norm / top);
    symmetric_with_spectrum(rng, &eig)
}
