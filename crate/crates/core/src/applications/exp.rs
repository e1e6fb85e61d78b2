//! Matrix exponentials: `exp(A)x` directly, and `exp(−A)x` for positive
//! semidefinite `A` through the resolvent `(I + A/k)⁻¹`.

use crate::applications::shifted::{AffineOperator, ShiftedInverse};
use crate::applications::{ceil_count, IterationConstants};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::lanczos::{apply_function, lanczos};
use crate::linalg::operator::SymmetricOperator;

/// Iteration count for `exp(A)x`: `⌈c₁‖A‖ + c₂ ln(1/ε)⌉`.
pub fn exp_iterations(a_norm: f64, eps: f64, c: &IterationConstants) -> usize {
    ceil_count(c.exp_norm * a_norm + c.exp_log * (1.0 / eps).ln())
}

/// Lanczos approximation of `exp(A)x`, targeting `‖exp(A)x − y‖ ≤ ε·e^{2‖A‖}‖x‖`.
pub fn matrix_exp_apply(a: &SymmetricOperator, x: &[f64], eps: f64) -> Result<Vec<f64>> {
    matrix_exp_apply_with(a, x, eps, &IterationConstants::default())
}

pub fn matrix_exp_apply_with(a: &SymmetricOperator, x: &[f64], eps: f64, c: &IterationConstants) -> Result<Vec<f64>> {
    check_eps(eps, true)?;
    let k = exp_iterations(a.norm_bound(), eps, c);
    let dec = lanczos(a, x, k)?;
    apply_function(&dec, &ScalarFunction::exp(), dec.x_norm)
}

/// Lanczos approximation of `exp(−A)x` for positive semidefinite `A`,
/// targeting `‖exp(−A)x − y‖ ≤ ε‖x‖`.
///
/// With `k = ⌈c·ln(1/ε)⌉`, Lanczos runs `k` steps on `B = (I + A/k)⁻¹` and
/// applies `f(μ) = e^{k − k/μ}`, which maps each eigenvalue `1/(1 + λ/k)`
/// of `B` to `e^{−λ}`. Products with `B` are CG solves.
pub fn matrix_exp_psd_apply(a: &SymmetricOperator, x: &[f64], eps: f64) -> Result<Vec<f64>> {
    matrix_exp_psd_apply_with(a, x, eps, &IterationConstants::default())
}

pub fn matrix_exp_psd_apply_with(
    a: &SymmetricOperator,
    x: &[f64],
    eps: f64,
    c: &IterationConstants,
) -> Result<Vec<f64>> {
    check_eps(eps, false)?;
    let k = ceil_count(c.exp_psd * (1.0 / eps).ln());
    let kf = k as f64;
    let n = a.dim() as f64;
    let inner_tol = (1e-3 * eps / (kf * n)).max(1e-15);
    let m = AffineOperator {
        a,
        scale: 1.0 / kf,
        shift: 1.0,
    };
    let b = ShiftedInverse::new(m, inner_tol);
    let dec = lanczos(&b, x, k)?;
    let f = ScalarFunction::from_fn("resolvent-exp", move |mu: f64| (kf - kf / mu).exp());
    apply_function(&dec, &f, dec.x_norm)
}

fn check_eps(eps: f64, closed: bool) -> Result<()> {
    let ok = eps > 0.0 && (eps < 1.0 || (closed && eps == 1.0));
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!("eps {eps} out of range")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_is_identity() {
        let a = SymmetricOperator::diagonal(vec![0.0; 3]).unwrap();
        let x = [1.0, -2.0, 0.5];
        assert_eq!(matrix_exp_apply(&a, &x, 1e-8).unwrap(), x.to_vec());
        let y = matrix_exp_psd_apply(&a, &x, 1e-6).unwrap();
        for (u, v) in y.iter().zip(x) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn diagonal_examples() {
        let a = SymmetricOperator::diagonal(vec![-1.0, 0.0]).unwrap();
        let y = matrix_exp_apply(&a, &[1.0, 1.0], 1e-8).unwrap();
        assert!((y[0] - (-1f64).exp()).abs() < 1e-7 && (y[1] - 1.0).abs() < 1e-7);
        let b = SymmetricOperator::diagonal(vec![2f64.ln()]).unwrap();
        let y = matrix_exp_psd_apply(&b, &[1.0], 1e-6).unwrap();
        assert!((y[0] - 0.5).abs() < 1e-5);
    }

    #[test]
    fn eps_range() {
        let a = SymmetricOperator::identity(2).unwrap();
        assert!(matrix_exp_apply(&a, &[1.0, 0.0], 0.0).is_err());
        assert!(matrix_exp_psd_apply(&a, &[1.0, 0.0], 1.0).is_err());
    }
}
