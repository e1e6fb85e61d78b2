//! Row-major dense matrices and the dense symmetric eigensolver used by the
//! exact oracle (Householder tridiagonalization followed by implicit QL).

use crate::error::{Error, Result};
use crate::tridiag::{implicit_ql, BasisSink};

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: c.len(),
                });
            }
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        Ok(m)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// `self · v`, ascending-index accumulation per row.
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| crate::arith::dot(self.row(i), v)).collect())
    }

    /// `selfᵀ · v`.
    pub fn matvec_transpose(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut out = vec![0.0; self.cols];
        for (i, vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Structural(format!(
                "shape {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|x| *x *= s);
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// `selfᵀ · self`.
    pub fn gram(&self) -> DenseMatrix {
        let mut g = Self::zeros(self.cols, self.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..self.cols {
                let a = row[i];
                if a == 0.0 {
                    continue;
                }
                let out = &mut g.data[i * self.cols..(i + 1) * self.cols];
                for (o, rj) in out.iter_mut().zip(row) {
                    *o += a * rj;
                }
            }
        }
        g
    }

    /// Spectral norm of a symmetric matrix (largest absolute eigenvalue).
    pub fn symmetric_spectral_norm(&self) -> Result<f64> {
        let eig = symmetric_eigen(self)?;
        Ok(eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs())))
    }

    /// Spectral norm of an arbitrary matrix via the eigenvalues of its Gram matrix.
    pub fn spectral_norm(&self) -> Result<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Ok(0.0);
        }
        let g = if self.cols <= self.rows {
            self.gram()
        } else {
            self.transpose().gram()
        };
        Ok(g.symmetric_spectral_norm()?.max(0.0).sqrt())
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigenvalues in ascending order with the matching eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

impl EigenDecomposition {
    /// `V diag(Λ) Vᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for i in 0..scaled.rows() {
            for j in 0..n {
                scaled[(i, j)] *= self.values[j];
            }
        }
        scaled.matmul(&self.vectors.transpose()).expect("square factors")
    }

    /// `VᵀV − I`.
    pub fn gram_defect(&self) -> DenseMatrix {
        let mut g = self.vectors.gram();
        for i in 0..g.rows() {
            g[(i, i)] -= 1.0;
        }
        g
    }

    /// Sorts eigenpairs by ascending eigenvalue.
    pub(crate) fn sort_ascending(mut self) -> Self {
        let n = self.values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]));
        if order.iter().enumerate().all(|(i, &o)| i == o) {
            return self;
        }
        let values = order.iter().map(|&o| self.values[o]).collect();
        let mut vectors = DenseMatrix::zeros(self.vectors.rows(), n);
        for (new, &old) in order.iter().enumerate() {
            for r in 0..vectors.rows() {
                vectors[(r, new)] = self.vectors[(r, old)];
            }
        }
        self.values = values;
        self.vectors = vectors;
        self
    }
}

/// Reduces a symmetric matrix to tridiagonal form `A = Q T Qᵀ` with
/// Householder reflections. Returns `(diag, offdiag, Q)`.
pub fn householder_tridiagonalize(a: &DenseMatrix) -> Result<(Vec<f64>, Vec<f64>, DenseMatrix)> {
    let n = a.rows();
    if n != a.cols() {
        return Err(Error::Structural(format!("matrix is {}x{}, not square", n, a.cols())));
    }
    let mut a = a.clone();
    let mut q = DenseMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<f64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let xnorm = crate::arith::norm2(&x);
        if xnorm == 0.0 {
            continue;
        }
        let alpha = if x[0] >= 0.0 { -xnorm } else { xnorm };
        let mut v = x;
        v[0] -= alpha;
        let vtv = crate::arith::dot(&v, &v);
        if vtv == 0.0 {
            continue;
        }
        let beta = 2.0 / vtv;
        let m = n - k - 1;
        // p = beta * S v on the trailing block
        let mut p = vec![0.0; m];
        for (i, pi) in p.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, vj) in v.iter().enumerate() {
                acc += a[(k + 1 + i, k + 1 + j)] * vj;
            }
            *pi = beta * acc;
        }
        let kk = beta * crate::arith::dot(&v, &p) / 2.0;
        let w: Vec<f64> = p.iter().zip(&v).map(|(pi, vi)| pi - kk * vi).collect();
        for i in 0..m {
            for j in 0..m {
                a[(k + 1 + i, k + 1 + j)] -= v[i] * w[j] + w[i] * v[j];
            }
        }
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = 0.0;
            a[(k, i)] = 0.0;
        }
        for r in 0..n {
            let mut t = 0.0;
            for (j, vj) in v.iter().enumerate() {
                t += q[(r, k + 1 + j)] * vj;
            }
            t *= beta;
            for (j, vj) in v.iter().enumerate() {
                q[(r, k + 1 + j)] -= t * vj;
            }
        }
    }
    let diag = (0..n).map(|i| a[(i, i)]).collect();
    let off = (0..n.saturating_sub(1)).map(|i| a[(i + 1, i)]).collect();
    Ok((diag, off, q))
}

/// Full eigendecomposition of a dense symmetric matrix.
pub fn symmetric_eigen(a: &DenseMatrix) -> Result<EigenDecomposition> {
    if !a.is_symmetric() {
        return Err(Error::Structural("matrix is not symmetric".into()));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(EigenDecomposition {
            values: vec![],
            vectors: DenseMatrix::zeros(0, 0),
        });
    }
    let (mut d, off, mut q) = householder_tridiagonalize(a)?;
    let mut e = off;
    e.push(0.0);
    implicit_ql(&mut d, &mut e, &mut BasisSink(&mut q))?;
    Ok(EigenDecomposition { values: d, vectors: q }.sort_ascending())
}

/// Orthonormalizes the columns of `m` (modified Gram–Schmidt, two passes).
pub fn orthonormalize_columns(m: &DenseMatrix) -> Result<DenseMatrix> {
    let mut cols: Vec<Vec<f64>> = (0..m.cols()).map(|j| m.column(j)).collect();
    for j in 0..cols.len() {
        for _ in 0..2 {
            for i in 0..j {
                let (head, tail) = cols.split_at_mut(j);
                let r = crate::arith::dot(&head[i], &tail[0]);
                for (x, qi) in tail[0].iter_mut().zip(&head[i]) {
                    *x -= r * qi;
                }
            }
        }
        let nrm = crate::arith::norm2(&cols[j]);
        if nrm == 0.0 {
            return Err(Error::Domain(format!("column {j} is linearly dependent")));
        }
        cols[j].iter_mut().for_each(|x| *x /= nrm);
    }
    DenseMatrix::from_columns(&cols)
}
