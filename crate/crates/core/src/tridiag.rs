//! Symmetric tridiagonal matrices and their eigendecomposition by implicit QL
//! iteration with Wilkinson shifts.

use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::linalg::dense::{DenseMatrix, EigenDecomposition};

/// Iteration cap per eigenvalue.
pub const MAX_QL_ITERATIONS: usize = 50_000;

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalMatrix {
    /// `diag` has length k ≥ 1 and `offdiag` length k − 1.
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Structural("tridiagonal matrix needs k >= 1".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len() - 1,
                found: offdiag.len(),
            });
        }
        crate::error::ensure_finite(&diag, "diagonal")?;
        crate::error::ensure_finite(&offdiag, "off-diagonal")?;
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// `max_i (|α_i| + |β_i| + |β_{i+1}|)`, an upper bound on `‖T‖`.
    pub fn norm_bound(&self) -> f64 {
        let k = self.dim();
        (0..k)
            .map(|i| {
                let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < k { self.offdiag[i].abs() } else { 0.0 };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut t = DenseMatrix::diagonal(&self.diag);
        for (i, b) in self.offdiag.iter().enumerate() {
            t[(i + 1, i)] = *b;
            t[(i, i + 1)] = *b;
        }
        t
    }

    /// `T v` for a length-k vector.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let k = self.dim();
        (0..k)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < k {
                    acc += self.offdiag[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Leading `m × m` principal submatrix.
    pub fn leading(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.dim() {
            return Err(Error::Structural(format!(
                "leading block of size {m} from dimension {}",
                self.dim()
            )));
        }
        Self::new(self.diag[..m].to_vec(), self.offdiag[..m - 1].to_vec())
    }

    fn work_arrays(&self) -> (Vec<f64>, Vec<f64>) {
        let mut e = self.offdiag.clone();
        e.push(0.0);
        (self.diag.clone(), e)
    }

    /// Eigenvalues only, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let (mut d, mut e) = self.work_arrays();
        implicit_ql(&mut d, &mut e, &mut NoSink)?;
        d.sort_by(f64::total_cmp);
        Ok(d)
    }
}

/// Full eigendecomposition `T = V Λ Vᵀ`, eigenvalues ascending.
pub fn eig_tridiagonal(t: &TridiagonalMatrix) -> Result<EigenDecomposition> {
    let (mut d, mut e) = t.work_arrays();
    let mut v = DenseMatrix::identity(t.dim());
    implicit_ql(&mut d, &mut e, &mut BasisSink(&mut v))?;
    Ok(EigenDecomposition { values: d, vectors: v }.sort_ascending())
}

/// `V f(Λ) Vᵀ e₁`, computed in O(k²) from the logged rotations without
/// forming `V`.
pub fn apply_scalar_to_e1(t: &TridiagonalMatrix, f: &ScalarFunction) -> Result<Vec<f64>> {
    let (mut d, mut e) = t.work_arrays();
    let mut log = RotationLog::default();
    implicit_ql(&mut d, &mut e, &mut log)?;
    let k = t.dim();
    // First row of V = I·G₁·G₂⋯.
    let mut w = vec![0.0; k];
    w[0] = 1.0;
    for &(i, c, s) in &log.0 {
        let (a, b) = (w[i], w[i + 1]);
        w[i] = c * a - s * b;
        w[i + 1] = s * a + c * b;
    }
    for (wj, lam) in w.iter_mut().zip(&d) {
        *wj *= f.eval_checked(*lam)?;
    }
    // V u applies the rotations last-to-first.
    for &(i, c, s) in log.0.iter().rev() {
        let (a, b) = (w[i], w[i + 1]);
        w[i] = c * a + s * b;
        w[i + 1] = -s * a + c * b;
    }
    Ok(w)
}

/// Receives the Givens rotations of the QL sweep, each acting on columns
/// `(i, i+1)` of the accumulated eigenvector matrix.
pub(crate) trait RotationSink {
    fn rotate(&mut self, i: usize, c: f64, s: f64);
}

pub(crate) struct NoSink;

impl RotationSink for NoSink {
    #[inline]
    fn rotate(&mut self, _: usize, _: f64, _: f64) {}
}

pub(crate) struct BasisSink<'a>(pub &'a mut DenseMatrix);

impl RotationSink for BasisSink<'_> {
    fn rotate(&mut self, i: usize, c: f64, s: f64) {
        let z = &mut *self.0;
        for r in 0..z.rows() {
            let f = z[(r, i + 1)];
            let g = z[(r, i)];
            z[(r, i + 1)] = s * g + c * f;
            z[(r, i)] = c * g - s * f;
        }
    }
}

#[derive(Default)]
pub(crate) struct RotationLog(Vec<(usize, f64, f64)>);

impl RotationSink for RotationLog {
    fn rotate(&mut self, i: usize, c: f64, s: f64) {
        self.0.push((i, c, s));
    }
}

/// Implicit QL on diagonal `d` and couplings `e` (`e[i]` couples `i` and
/// `i+1`, `e[n-1]` unused). On return `d` holds the eigenvalues, unsorted.
pub(crate) fn implicit_ql<S: RotationSink>(d: &mut [f64], e: &mut [f64], sink: &mut S) -> Result<()> {
    let n = d.len();
    debug_assert_eq!(e.len(), n);
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= f64::MIN_POSITIVE {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::Internal(format!(
                    "QL iteration did not converge for eigenvalue {l}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                sink.rotate(i, c, s);
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(d: &[f64], e: &[f64]) -> TridiagonalMatrix {
        TridiagonalMatrix::new(d.to_vec(), e.to_vec()).unwrap()
    }

    #[test]
    fn already_diagonal() {
        let eig = eig_tridiagonal(&t(&[2.0, 5.0], &[0.0])).unwrap();
        assert_eq!(eig.values, vec![2.0, 5.0]);
        assert_eq!(eig.vectors, DenseMatrix::identity(2));
    }

    #[test]
    fn two_by_two_hand_solution() {
        let eig = eig_tridiagonal(&t(&[0.0, 0.0], &[1.0])).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-15);
        assert!((eig.values[1] - 1.0).abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // Columns are (1, ∓1)/√2 up to sign.
        let v0 = eig.vectors.column(0);
        let v1 = eig.vectors.column(1);
        assert!((v0[0].abs() - h).abs() < 1e-15 && (v0[0] + v0[1]).abs() < 1e-15);
        assert!((v1[0].abs() - h).abs() < 1e-15 && (v1[0] - v1[1]).abs() < 1e-15);
    }

    #[test]
    fn scalar_case() {
        let eig = eig_tridiagonal(&t(&[7.0], &[])).unwrap();
        assert_eq!(eig.values, vec![7.0]);
        assert_eq!(eig.vectors[(0, 0)], 1.0);
    }

    #[test]
    fn shape_errors() {
        assert!(TridiagonalMatrix::new(vec![], vec![]).is_err());
        assert!(TridiagonalMatrix::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(TridiagonalMatrix::new(vec![f64::NAN], vec![]).is_err());
    }

    #[test]
    fn apply_to_e1_examples() {
        let one = ScalarFunction::constant(1.0);
        let id = ScalarFunction::identity();
        let tm = t(&[1.0, -2.0, 0.5, 3.0], &[0.7, -1.1, 0.2]);
        let e1 = apply_scalar_to_e1(&tm, &one).unwrap();
        assert!((e1[0] - 1.0).abs() < 1e-13);
        assert!(e1[1..].iter().all(|x| x.abs() < 1e-13));
        let col = apply_scalar_to_e1(&tm, &id).unwrap();
        let want = [1.0, 0.7, 0.0, 0.0];
        for (a, b) in col.iter().zip(want) {
            assert!((a - b).abs() < 1e-12 * tm.norm_bound());
        }
        let s = apply_scalar_to_e1(&t(&[1.0, 4.0], &[0.0]), &ScalarFunction::sqrt()).unwrap();
        assert_eq!(s, vec![1.0, 0.0]);
    }

    #[test]
    fn rotation_log_matches_full_basis() {
        let tm = t(&[0.3, 1.2, -0.4, 2.0, 0.9], &[0.5, 0.25, -0.8, 1.0]);
        let f = ScalarFunction::exp();
        let fast = apply_scalar_to_e1(&tm, &f).unwrap();
        let eig = eig_tridiagonal(&tm).unwrap();
        let slow: Vec<f64> = (0..5)
            .map(|i| {
                (0..5)
                    .map(|j| eig.vectors[(i, j)] * eig.values[j].exp() * eig.vectors[(0, j)])
                    .sum()
            })
            .collect();
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn domain_error_names_eigenvalue() {
        let err = apply_scalar_to_e1(&t(&[-1.0, 4.0], &[0.0]), &ScalarFunction::sqrt()).unwrap_err();
        assert_eq!(err.kind(), "domain");
        assert!(err.to_string().contains("-1"));
    }

    #[test]
    fn norm_bound_dominates_dense_norm() {
        let tm = t(&[1.0, -3.0, 2.0], &[2.0, 0.5]);
        let dense = tm.to_dense().symmetric_spectral_norm().unwrap();
        assert!(dense <= tm.norm_bound());
    }
}
