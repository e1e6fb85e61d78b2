//! Conjugate gradient for positive definite systems and its relation to the
//! Lanczos approximation of `A⁻¹b`.

use rand::Rng;

use crate::arith::{dot, norm2};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::lanczos::{apply_function, lanczos};
use crate::linalg::operator::{LinearOperator, SymmetricOperator};
use crate::linalg::oracle::ExactOracle;
use crate::polyapprox::ChebyshevExpansion;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CgOptions {
    /// Use `α = ‖r‖/⟨r, Ap⟩` and `β = −‖r'‖/‖r‖` instead of the squared norms.
    pub paper_literal: bool,
}

/// Per-iteration history of a CG run.
#[derive(Debug, Clone, PartialEq)]
pub struct CgTrace {
    /// `y_1, …, y_m`.
    pub iterates: Vec<Vec<f64>>,
    /// `‖r_0‖, …, ‖r_m‖`.
    pub residual_norms: Vec<f64>,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl CgTrace {
    pub fn iterations(&self) -> usize {
        self.iterates.len()
    }

    /// The last iterate, or zeros if no step was taken.
    pub fn solution(&self, n: usize) -> Vec<f64> {
        self.iterates.last().cloned().unwrap_or_else(|| vec![0.0; n])
    }
}

/// Up to `k` CG steps from `y_0 = 0`, stopping once `‖r‖ ≤ stop_tol·‖b‖`.
pub fn cg_solve<Op: LinearOperator + ?Sized>(a: &Op, b: &[f64], k: usize, stop_tol: f64) -> Result<CgTrace> {
    cg_solve_with(a, b, k, stop_tol, CgOptions::default())
}

pub fn cg_solve_with<Op: LinearOperator + ?Sized>(
    a: &Op,
    b: &[f64],
    k: usize,
    stop_tol: f64,
    opts: CgOptions,
) -> Result<CgTrace> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    if k < 1 {
        return Err(Error::Structural("CG needs k >= 1".into()));
    }
    crate::error::ensure_finite(b, "right-hand side")?;
    let b_norm = norm2(b);
    let mut trace = CgTrace {
        iterates: Vec::with_capacity(k),
        residual_norms: vec![b_norm],
        alphas: Vec::with_capacity(k),
        betas: Vec::with_capacity(k),
    };
    if b_norm == 0.0 {
        return Ok(trace);
    }
    let mut y = vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut r_norm = b_norm;
    for i in 1..=k {
        let ap = a.apply(&p)?;
        let curvature = dot(&r, &ap);
        if !(curvature > 0.0) {
            return Err(Error::NonpositiveCurvature {
                iteration: i,
                value: curvature,
            });
        }
        let alpha = if opts.paper_literal {
            r_norm / curvature
        } else {
            r_norm * r_norm / curvature
        };
        for j in 0..n {
            y[j] += alpha * p[j];
            r[j] -= alpha * ap[j];
        }
        let r_new = norm2(&r);
        let beta = if opts.paper_literal {
            -r_new / r_norm
        } else {
            -(r_new * r_new) / (r_norm * r_norm)
        };
        for j in 0..n {
            p[j] = r[j] - beta * p[j];
        }
        trace.iterates.push(y.clone());
        trace.residual_norms.push(r_new);
        trace.alphas.push(alpha);
        trace.betas.push(beta);
        r_norm = r_new;
        if r_new <= stop_tol * b_norm || beta.abs() <= f64::EPSILON {
            break;
        }
    }
    Ok(trace)
}

/// `‖y_CG(k) − ‖b‖·Q T⁻¹ e₁‖ / ‖A⁻¹b‖`.
pub fn lanczos_cg_equivalence(a: &SymmetricOperator, b: &[f64], k: usize) -> Result<f64> {
    let y_cg = cg_solve(a, b, k, 0.0)?.solution(a.dim());
    let dec = lanczos(a, b, k)?;
    let y_l = apply_function(&dec, &ScalarFunction::inverse(), dec.x_norm)?;
    let exact = ExactOracle::new(a)?.apply(&ScalarFunction::inverse(), b)?;
    let diff: Vec<f64> = y_cg.iter().zip(&y_l).map(|(u, v)| u - v).collect();
    Ok(norm2(&diff) / norm2(&exact))
}

/// `‖v‖_A = √(vᵀAv)`.
pub fn a_norm(a: &SymmetricOperator, v: &[f64]) -> Result<f64> {
    Ok(dot(v, &a.matvec(v)?).max(0.0).sqrt())
}

/// Checks that no sampled degree-`< k` polynomial `p` beats CG in the
/// A-norm: `‖A⁻¹b − p(A)b‖_A ≥ ‖A⁻¹b − y_k‖_A − 1e−9`.
///
/// Half the trials are random Chebyshev expansions on the spectral interval;
/// the other half perturb `y_k` within the Krylov space.
pub fn anorm_optimality_check(
    a: &SymmetricOperator,
    b: &[f64],
    k: usize,
    trial_polys: usize,
    seed: u64,
) -> Result<bool> {
    let oracle = ExactOracle::new(a)?;
    let exact = oracle.apply(&ScalarFunction::inverse(), b)?;
    let y_k = cg_solve(a, b, k, 0.0)?.solution(a.dim());
    let err_of = |y: &[f64]| -> Result<f64> {
        let e: Vec<f64> = exact.iter().zip(y).map(|(u, v)| u - v).collect();
        a_norm(a, &e)
    };
    let best = err_of(&y_k)?;
    let dec = lanczos(a, b, k)?;
    let (lo, hi) = (oracle.lambda_min(), oracle.lambda_max());
    let interval = if hi > lo { (lo, hi) } else { (lo - 1.0, hi + 1.0) };
    let mut rng = crate::random::rng(seed);
    for t in 0..trial_polys {
        let y = if t % 2 == 0 {
            let coeffs = crate::random::uniform_vector(&mut rng, k, -1.0, 1.0);
            let scale = rng.random_range(0.0..=2.0) / norm2(b).max(f64::MIN_POSITIVE);
            ChebyshevExpansion::new(interval, coeffs.iter().map(|c| c * scale).collect())?.apply(a, b)?
        } else {
            let w = crate::random::gaussian_vector(&mut rng, dec.steps_taken);
            let size = 10f64.powf(rng.random_range(-6.0..=0.0)) * norm2(&y_k);
            let dir = dec.combine(&w, &crate::arith::Native);
            let dn = norm2(&dir).max(f64::MIN_POSITIVE);
            y_k.iter().zip(&dir).map(|(y, d)| y + size * d / dn).collect()
        };
        if err_of(&y)? < best - 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}
