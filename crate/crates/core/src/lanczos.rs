//! The Lanczos iteration and the `‖x‖·Q f(T) e₁` approximation of `f(A)x`.

use crate::arith::{Arithmetic, Native};
use crate::error::{ensure_finite, Error, Result};
use crate::function::ScalarFunction;
use crate::linalg::dense::DenseMatrix;
use crate::linalg::operator::{LinearOperator, SymmetricOperator};
use crate::tridiag::{apply_scalar_to_e1, TridiagonalMatrix};

/// Output of `k` Lanczos steps: `AQ = QT + β_{k+1} q_{k+1} e_kᵀ (+ E)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LanczosDecomposition {
    /// Basis vectors `q_1..q_k`.
    pub basis: Vec<Vec<f64>>,
    /// Diagonal `α_1..α_k` of `T`.
    pub alphas: Vec<f64>,
    /// Off-diagonal `β_2..β_k` of `T`.
    pub betas: Vec<f64>,
    pub beta_next: f64,
    /// `q_{k+1}`, or zeros when `β_{k+1} = 0`.
    pub q_next: Vec<f64>,
    pub steps_taken: usize,
    pub requested: usize,
    pub breakdown: bool,
    /// `‖x‖` of the starting vector as computed by the run.
    pub x_norm: f64,
}

impl LanczosDecomposition {
    pub fn dim(&self) -> usize {
        self.q_next.len()
    }

    pub fn tridiagonal(&self) -> TridiagonalMatrix {
        TridiagonalMatrix::new(self.alphas.clone(), self.betas.clone())
            .expect("Lanczos coefficients are finite and consistently sized")
    }

    /// Eigenvalues of `T`, ascending.
    pub fn ritz_values(&self) -> Result<Vec<f64>> {
        self.tridiagonal().eigenvalues()
    }

    /// `Q` as an `n × k` matrix.
    pub fn basis_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_columns(&self.basis).expect("basis columns share a length")
    }

    /// `Q w` with ascending column accumulation and rounding by `ar`.
    pub(crate) fn combine<Ar: Arithmetic>(&self, w: &[f64], ar: &Ar) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        for (q, wj) in self.basis.iter().zip(w) {
            for (yi, qi) in y.iter_mut().zip(q) {
                *yi = ar.add(*yi, ar.mul(*qi, *wj));
            }
        }
        y
    }
}

/// Default relative breakdown tolerance `64·n·ε`.
pub fn default_breakdown_tol(n: usize) -> f64 {
    64.0 * n as f64 * f64::EPSILON
}

/// Runs up to `k` Lanczos steps from `x`. The iteration stops early when
/// `β_{i+1} ≤ breakdown_tol · max(‖A‖-hint, max |α|)`.
pub fn lanczos_decompose<Op: LinearOperator + ?Sized>(
    a: &Op,
    x: &[f64],
    k: usize,
    breakdown_tol: f64,
) -> Result<LanczosDecomposition> {
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: x.len(),
        });
    }
    lanczos_core(|v| a.apply(v), x, k, breakdown_tol, a.norm_hint(), &Native)
}

/// [`lanczos_decompose`] with the default tolerance.
pub fn lanczos<Op: LinearOperator + ?Sized>(a: &Op, x: &[f64], k: usize) -> Result<LanczosDecomposition> {
    lanczos_decompose(a, x, k, default_breakdown_tol(a.dim()))
}

/// The recurrence, generic over the matrix-vector product and the scalar
/// arithmetic.
pub(crate) fn lanczos_core<Ar, M>(
    mut matvec: M,
    x: &[f64],
    k: usize,
    breakdown_tol: f64,
    norm_hint: Option<f64>,
    ar: &Ar,
) -> Result<LanczosDecomposition>
where
    Ar: Arithmetic,
    M: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    if k < 1 {
        return Err(Error::Structural("Lanczos needs k >= 1".into()));
    }
    if !(breakdown_tol >= 0.0) {
        return Err(Error::Domain(format!(
            "breakdown tolerance {breakdown_tol} is negative"
        )));
    }
    ensure_finite(x, "starting vector")?;
    let n = x.len();
    let x_norm = ar.norm(x);
    if x_norm == 0.0 {
        return Err(Error::Domain("starting vector is zero".into()));
    }
    let mut q = x.to_vec();
    ar.scale_div(&mut q, x_norm);
    let mut q_prev = vec![0.0; n];
    let mut beta = 0.0;
    let mut scale = norm_hint.unwrap_or(0.0);

    let mut basis = Vec::with_capacity(k);
    let mut alphas = Vec::with_capacity(k);
    let mut betas = Vec::with_capacity(k.saturating_sub(1));
    let mut breakdown = false;
    let mut beta_next;
    let mut w;
    loop {
        w = matvec(&q)?;
        ar.axpy_neg(beta, &q_prev, &mut w);
        let alpha = ar.dot(&w, &q);
        ar.axpy_neg(alpha, &q, &mut w);
        beta_next = ar.norm(&w);
        alphas.push(alpha);
        scale = scale.max(alpha.abs());
        let done = alphas.len() == k;
        if !done && beta_next <= breakdown_tol * scale {
            breakdown = true;
        }
        basis.push(std::mem::take(&mut q));
        if done || breakdown {
            break;
        }
        betas.push(beta_next);
        ar.scale_div(&mut w, beta_next);
        q_prev = basis.last().expect("just pushed").clone();
        q = std::mem::take(&mut w);
        beta = beta_next;
    }
    let q_next = if beta_next > 0.0 {
        ar.scale_div(&mut w, beta_next);
        w
    } else {
        vec![0.0; n]
    };
    if !beta_next.is_finite() || alphas.iter().any(|a| !a.is_finite()) {
        return Err(Error::Domain(
            "Lanczos recurrence produced a non-finite coefficient".into(),
        ));
    }
    Ok(LanczosDecomposition {
        steps_taken: basis.len(),
        basis,
        alphas,
        betas,
        beta_next,
        q_next,
        requested: k,
        breakdown,
        x_norm,
    })
}

/// `y = x_norm · Q f(T) e₁`.
pub fn apply_function(dec: &LanczosDecomposition, f: &ScalarFunction, x_norm: f64) -> Result<Vec<f64>> {
    apply_function_with(dec, f, x_norm, &Native)
}

/// [`apply_function`] with the final combination `Q·w` rounded by `ar`.
pub fn apply_function_with<Ar: Arithmetic>(
    dec: &LanczosDecomposition,
    f: &ScalarFunction,
    x_norm: f64,
    ar: &Ar,
) -> Result<Vec<f64>> {
    let w = apply_scalar_to_e1(&dec.tridiagonal(), f)?;
    let scaled: Vec<f64> = w.iter().map(|v| ar.mul(x_norm, *v)).collect();
    Ok(dec.combine(&scaled, ar))
}

/// Runs `k` steps from `x` and returns `‖x‖·Q f(T) e₁`.
pub fn lanczos_apply<Op: LinearOperator + ?Sized>(a: &Op, f: &ScalarFunction, x: &[f64], k: usize) -> Result<Vec<f64>> {
    let dec = lanczos(a, x, k)?;
    apply_function(&dec, f, dec.x_norm)
}

/// `AQ − QT − β_{k+1} q_{k+1} e_kᵀ` as an explicit `n × k` matrix.
pub fn three_term_residual_matrix(dec: &LanczosDecomposition, a: &SymmetricOperator) -> Result<DenseMatrix> {
    let n = dec.dim();
    if a.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: n,
        });
    }
    let k = dec.steps_taken;
    let mut r = DenseMatrix::zeros(n, k);
    for j in 0..k {
        let mut col = a.matvec_with(&dec.basis[j], &Native);
        for (i, c) in col.iter_mut().enumerate() {
            *c -= dec.alphas[j] * dec.basis[j][i];
            if j > 0 {
                *c -= dec.betas[j - 1] * dec.basis[j - 1][i];
            }
            if j + 1 < k {
                *c -= dec.betas[j] * dec.basis[j + 1][i];
            } else {
                *c -= dec.beta_next * dec.q_next[i];
            }
        }
        for (i, c) in col.into_iter().enumerate() {
            r[(i, j)] = c;
        }
    }
    Ok(r)
}

/// `‖AQ − QT − β_{k+1} q_{k+1} e_kᵀ‖₂`.
pub fn three_term_residual(dec: &LanczosDecomposition, a: &SymmetricOperator) -> Result<f64> {
    three_term_residual_matrix(dec, a)?.spectral_norm()
}

/// `‖QᵀQ − I‖₂`.
pub fn orthogonality_defect(dec: &LanczosDecomposition) -> f64 {
    let mut g = dec.basis_matrix().gram();
    for i in 0..g.rows() {
        g[(i, i)] -= 1.0;
    }
    g.symmetric_spectral_norm().unwrap_or(f64::INFINITY)
}
