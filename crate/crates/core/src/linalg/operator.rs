//! Symmetric operators exposed through matrix-vector products.

use crate::arith::{Arithmetic, Native};
use crate::error::{ensure_finite, Error, Result};
use crate::linalg::dense::DenseMatrix;

/// Anything Lanczos can iterate on: a symmetric map on `ℝⁿ`.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    fn apply(&self, v: &[f64]) -> Result<Vec<f64>>;

    /// Known upper bound on the operator norm, if any.
    fn norm_hint(&self) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Storage {
    /// Packed lower triangle, row by row: row `i` holds `a_{i,0..=i}`.
    DenseLower(Vec<f64>),
    /// Compressed sparse rows holding both triangles, columns ascending.
    Csr {
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    },
    Diagonal(Vec<f64>),
    /// The operator `BᵀB` for a dense `m × n` matrix `B`.
    Gram(DenseMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricOperator {
    n: usize,
    storage: Storage,
    norm_hint: Option<f64>,
}

impl SymmetricOperator {
    /// Dense symmetric matrix; rejected unless `A = Aᵀ` exactly.
    pub fn from_dense(a: &DenseMatrix) -> Result<Self> {
        if a.rows() != a.cols() {
            return Err(Error::Structural(format!(
                "matrix is {}x{}, not square",
                a.rows(),
                a.cols()
            )));
        }
        ensure_finite(a.as_slice(), "matrix")?;
        if !a.is_symmetric() {
            return Err(Error::Structural("matrix is not symmetric".into()));
        }
        Ok(Self::pack_lower(a))
    }

    /// Dense matrix replaced by `(A + Aᵀ)/2`.
    pub fn from_dense_symmetrized(a: &DenseMatrix) -> Result<Self> {
        if a.rows() != a.cols() {
            return Err(Error::Structural(format!(
                "matrix is {}x{}, not square",
                a.rows(),
                a.cols()
            )));
        }
        ensure_finite(a.as_slice(), "matrix")?;
        let n = a.rows();
        let mut s = a.clone();
        for i in 0..n {
            for j in 0..i {
                let v = 0.5 * (a[(i, j)] + a[(j, i)]);
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        Ok(Self::pack_lower(&s))
    }

    fn pack_lower(a: &DenseMatrix) -> Self {
        let n = a.rows();
        let mut packed = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            packed.extend_from_slice(&a.row(i)[..=i]);
        }
        Self {
            n,
            storage: Storage::DenseLower(packed),
            norm_hint: None,
        }
    }

    /// Sparse operator from lower-triangle triplets `(i, j, v)` with `j ≤ i`,
    /// zero-based. Off-diagonal entries are mirrored; duplicates are summed.
    pub fn from_lower_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut full = Vec::with_capacity(2 * triplets.len());
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::Structural(format!("entry ({i}, {j}) outside a {n}x{n} matrix")));
            }
            if j > i {
                return Err(Error::Structural(format!("entry ({i}, {j}) is above the diagonal")));
            }
            if !v.is_finite() {
                return Err(Error::Domain(format!("entry ({i}, {j}) is {v}")));
            }
            full.push((i, j, v));
            if i != j {
                full.push((j, i, v));
            }
        }
        Ok(Self::csr_from_full(n, full))
    }

    /// Sparse operator from a full (both-triangle) triplet list; rejected
    /// unless the summed entries are exactly symmetric.
    pub fn from_general_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::Structural(format!("entry ({i}, {j}) outside a {n}x{n} matrix")));
            }
            if !v.is_finite() {
                return Err(Error::Domain(format!("entry ({i}, {j}) is {v}")));
            }
        }
        let op = Self::csr_from_full(n, triplets.to_vec());
        if let Storage::Csr {
            row_ptr,
            col_idx,
            values,
        } = &op.storage
        {
            for i in 0..n {
                for p in row_ptr[i]..row_ptr[i + 1] {
                    let j = col_idx[p];
                    let row_j = &col_idx[row_ptr[j]..row_ptr[j + 1]];
                    let mirrored = row_j
                        .binary_search(&i)
                        .ok()
                        .map(|q| values[row_ptr[j] + q])
                        .unwrap_or(0.0);
                    if mirrored != values[p] {
                        return Err(Error::Structural(format!(
                            "matrix is not symmetric: a({},{}) = {} but a({},{}) = {}",
                            i + 1,
                            j + 1,
                            values[p],
                            j + 1,
                            i + 1,
                            mirrored
                        )));
                    }
                }
            }
        }
        Ok(op)
    }

    fn csr_from_full(n: usize, mut full: Vec<(usize, usize, f64)>) -> Self {
        full.sort_by_key(|t| (t.0, t.1));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx: Vec<usize> = Vec::with_capacity(full.len());
        let mut values: Vec<f64> = Vec::with_capacity(full.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in full {
            if last == Some((i, j)) {
                *values.last_mut().expect("previous entry") += v;
                continue;
            }
            last = Some((i, j));
            col_idx.push(j);
            values.push(v);
            row_ptr[i + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            n,
            storage: Storage::Csr {
                row_ptr,
                col_idx,
                values,
            },
            norm_hint: None,
        }
    }

    pub fn diagonal(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Structural("operator dimension must be positive".into()));
        }
        ensure_finite(&values, "diagonal")?;
        let hint = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Self {
            n: values.len(),
            storage: Storage::Diagonal(values),
            norm_hint: Some(hint),
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::diagonal(vec![1.0; n])
    }

    /// The positive semidefinite operator `BᵀB`.
    pub fn gram(b: DenseMatrix) -> Result<Self> {
        ensure_finite(b.as_slice(), "matrix")?;
        if b.cols() == 0 {
            return Err(Error::Structural("operator dimension must be positive".into()));
        }
        Ok(Self {
            n: b.cols(),
            storage: Storage::Gram(b),
            norm_hint: None,
        })
    }

    pub fn with_norm_hint(mut self, hint: f64) -> Self {
        self.norm_hint = Some(hint);
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    pub fn norm_hint(&self) -> Option<f64> {
        self.norm_hint
    }

    /// The hint if present, otherwise a Gershgorin (or Frobenius, for `BᵀB`) bound.
    pub fn norm_bound(&self) -> f64 {
        if let Some(h) = self.norm_hint {
            return h;
        }
        match &self.storage {
            Storage::Diagonal(d) => d.iter().fold(0.0, |m, v| m.max(v.abs())),
            Storage::Gram(b) => b.frobenius_norm().powi(2),
            _ => {
                let a = self.materialize();
                (0..self.n)
                    .map(|i| a.row(i).iter().map(|v| v.abs()).sum::<f64>())
                    .fold(0.0, f64::max)
            }
        }
    }

    /// `A` as an explicit dense matrix.
    pub fn materialize(&self) -> DenseMatrix {
        let n = self.n;
        match &self.storage {
            Storage::DenseLower(p) => {
                let mut a = DenseMatrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..=i {
                        let v = p[i * (i + 1) / 2 + j];
                        a[(i, j)] = v;
                        a[(j, i)] = v;
                    }
                }
                a
            }
            Storage::Csr {
                row_ptr,
                col_idx,
                values,
            } => {
                let mut a = DenseMatrix::zeros(n, n);
                for i in 0..n {
                    for p in row_ptr[i]..row_ptr[i + 1] {
                        a[(i, col_idx[p])] = values[p];
                    }
                }
                a
            }
            Storage::Diagonal(d) => DenseMatrix::diagonal(d),
            Storage::Gram(b) => b.gram(),
        }
    }

    /// `A v` in working precision.
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.checked_matvec_with(v, &Native)
    }

    /// `A v` with every product and sum rounded by `ar`, accumulating in
    /// ascending index order.
    pub fn checked_matvec_with<Ar: Arithmetic>(&self, v: &[f64], ar: &Ar) -> Result<Vec<f64>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        ensure_finite(v, "vector")?;
        Ok(self.matvec_with(v, ar))
    }

    pub(crate) fn matvec_with<Ar: Arithmetic>(&self, v: &[f64], ar: &Ar) -> Vec<f64> {
        let n = self.n;
        match &self.storage {
            Storage::DenseLower(p) => (0..n)
                .map(|i| {
                    let mut acc = 0.0;
                    for (j, vj) in v.iter().enumerate() {
                        let a = if j <= i {
                            p[i * (i + 1) / 2 + j]
                        } else {
                            p[j * (j + 1) / 2 + i]
                        };
                        acc = ar.add(acc, ar.mul(a, *vj));
                    }
                    acc
                })
                .collect(),
            Storage::Csr {
                row_ptr,
                col_idx,
                values,
            } => (0..n)
                .map(|i| {
                    let mut acc = 0.0;
                    for p in row_ptr[i]..row_ptr[i + 1] {
                        acc = ar.add(acc, ar.mul(values[p], v[col_idx[p]]));
                    }
                    acc
                })
                .collect(),
            Storage::Diagonal(d) => d.iter().zip(v).map(|(a, b)| ar.mul(*a, *b)).collect(),
            Storage::Gram(b) => {
                let w: Vec<f64> = (0..b.rows()).map(|i| ar.dot(b.row(i), v)).collect();
                (0..n)
                    .map(|j| {
                        let mut acc = 0.0;
                        for (i, wi) in w.iter().enumerate() {
                            acc = ar.add(acc, ar.mul(b[(i, j)], *wi));
                        }
                        acc
                    })
                    .collect()
            }
        }
    }
}

impl LinearOperator for SymmetricOperator {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.matvec(v)
    }

    fn norm_hint(&self) -> Option<f64> {
        self.norm_hint
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal_action() {
        let i2 = SymmetricOperator::identity(2).unwrap();
        assert_eq!(i2.matvec(&[3.0, -1.0]).unwrap(), vec![3.0, -1.0]);
        let d = SymmetricOperator::diagonal(vec![1.0, 2.0, 4.0]).unwrap();
        assert_eq!(d.matvec(&[1.0, 1.0, 1.0]).unwrap(), vec![1.0, 2.0, 4.0]);
    }

    #[test]
    fn swap_matrix_by_hand() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let op = SymmetricOperator::from_dense(&a).unwrap();
        assert_eq!(op.matvec(&[2.0, 5.0]).unwrap(), vec![5.0, 2.0]);
    }

    #[test]
    fn rejects_bad_input() {
        let a = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        assert_eq!(SymmetricOperator::from_dense(&a).unwrap_err().kind(), "structural");
        let sym = SymmetricOperator::from_dense_symmetrized(&a).unwrap();
        assert_eq!(sym.materialize()[(0, 1)], 1.5);
        let op = SymmetricOperator::identity(3).unwrap();
        assert_eq!(op.matvec(&[1.0]).unwrap_err().kind(), "structural");
        assert_eq!(op.matvec(&[1.0, f64::NAN, 0.0]).unwrap_err().kind(), "domain");
    }

    #[test]
    fn storages_agree_with_materialized() {
        let trip = [(0, 0, 2.0), (1, 0, 1.0), (1, 1, 3.0), (2, 1, -0.5), (2, 2, 1.0)];
        let sparse = SymmetricOperator::from_lower_triplets(3, &trip).unwrap();
        let dense = SymmetricOperator::from_dense(&sparse.materialize()).unwrap();
        let v = [0.3, -1.2, 2.0];
        assert_eq!(sparse.matvec(&v).unwrap(), dense.matvec(&v).unwrap());
        let b = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0], vec![3.0, -1.0]]).unwrap();
        let g = SymmetricOperator::gram(b.clone()).unwrap();
        let want = b.gram().matvec(&[1.0, 1.0]).unwrap();
        let got = g.matvec(&[1.0, 1.0]).unwrap();
        for (x, y) in want.iter().zip(&got) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn general_triplets_checked_for_symmetry() {
        let ok = [(0, 1, 2.0), (1, 0, 2.0), (0, 0, 1.0)];
        assert!(SymmetricOperator::from_general_triplets(2, &ok).is_ok());
        let bad = [(0, 1, 2.0), (1, 0, 2.5)];
        assert_eq!(
            SymmetricOperator::from_general_triplets(2, &bad).unwrap_err().kind(),
            "structural"
        );
    }
}
