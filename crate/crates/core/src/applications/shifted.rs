//! Operators derived from a symmetric operator: affine shifts, CG-backed
//! inverses, and the step transform `A(A + λI)⁻¹ − I/2`.

use crate::cg::cg_solve;
use crate::error::{Error, Result};
use crate::linalg::operator::LinearOperator;

/// `shift·I + scale·A`.
pub struct AffineOperator<'a, Op: LinearOperator + ?Sized> {
    pub a: &'a Op,
    pub scale: f64,
    pub shift: f64,
}

impl<Op: LinearOperator + ?Sized> LinearOperator for AffineOperator<'_, Op> {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let av = self.a.apply(v)?;
        Ok(av.iter().zip(v).map(|(p, q)| self.scale * p + self.shift * q).collect())
    }

    fn norm_hint(&self) -> Option<f64> {
        self.a.norm_hint().map(|h| self.shift.abs() + self.scale.abs() * h)
    }
}

/// `M⁻¹` for a positive definite `M`, each product realized by CG to a
/// relative residual of `tol`.
pub struct ShiftedInverse<Op: LinearOperator> {
    pub m: Op,
    pub tol: f64,
    pub max_iterations: usize,
}

impl<Op: LinearOperator> ShiftedInverse<Op> {
    pub fn new(m: Op, tol: f64) -> Self {
        let max_iterations = 4 * m.dim() + 20;
        Self { m, tol, max_iterations }
    }
}

impl<Op: LinearOperator> LinearOperator for ShiftedInverse<Op> {
    fn dim(&self) -> usize {
        self.m.dim()
    }

    fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let trace = cg_solve(&self.m, v, self.max_iterations, self.tol)?;
        let b_norm = trace.residual_norms[0];
        let last = *trace.residual_norms.last().expect("initial residual");
        if last > self.tol * b_norm * 1e3 {
            return Err(Error::Internal(format!(
                "inner CG stalled at relative residual {:e}",
                last / b_norm
            )));
        }
        Ok(trace.solution(self.dim()))
    }
}

/// `A(A + λI)⁻¹ − I/2` for positive semidefinite `A` and `λ > 0`; its
/// spectrum lies in `[−1/2, 1/2)` with eigenvalue `λ_i(A)` mapped above zero
/// exactly when `λ_i(A) > λ`.
pub struct StepTransform<'a, Op: LinearOperator + ?Sized> {
    a: &'a Op,
    inverse: ShiftedInverse<AffineOperator<'a, Op>>,
}

impl<'a, Op: LinearOperator + ?Sized> StepTransform<'a, Op> {
    pub fn new(a: &'a Op, lambda: f64, tol: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::Domain(format!("step location {lambda} must be positive")));
        }
        let shifted = AffineOperator {
            a,
            scale: 1.0,
            shift: lambda,
        };
        Ok(Self {
            a,
            inverse: ShiftedInverse::new(shifted, tol),
        })
    }
}

impl<Op: LinearOperator + ?Sized> LinearOperator for StepTransform<'_, Op> {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let w = self.inverse.apply(v)?;
        let aw = self.a.apply(&w)?;
        Ok(aw.iter().zip(v).map(|(p, q)| p - 0.5 * q).collect())
    }

    fn norm_hint(&self) -> Option<f64> {
        Some(0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SymmetricOperator;

    #[test]
    fn inverse_of_shifted_diagonal() {
        let a = SymmetricOperator::diagonal(vec![1.0, 3.0]).unwrap();
        let m = AffineOperator {
            a: &a,
            scale: 0.5,
            shift: 1.0,
        };
        let inv = ShiftedInverse::new(m, 1e-14);
        let y = inv.apply(&[1.5, 2.5]).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-13 && (y[1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn step_transform_spectrum() {
        let a = SymmetricOperator::diagonal(vec![0.0, 1.0, 3.0]).unwrap();
        let s = StepTransform::new(&a, 1.0, 1e-14).unwrap();
        let y = s.apply(&[1.0, 1.0, 1.0]).unwrap();
        let want = [-0.5, 0.0, 0.25];
        for (u, v) in y.iter().zip(want) {
            assert!((u - v).abs() < 1e-12);
        }
        assert!(StepTransform::new(&a, 0.0, 1e-12).is_err());
    }
}
