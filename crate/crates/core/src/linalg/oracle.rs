//! Ground truth `f(A)x = V f(Λ) Vᵀ x` from a full dense eigendecomposition.

use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::lanczos::lanczos;
use crate::linalg::dense::{symmetric_eigen, EigenDecomposition};
use crate::linalg::operator::{Storage, SymmetricOperator};

/// Largest dimension the dense oracle accepts.
pub const ORACLE_CAP: usize = 2000;

/// Seed of the start vector used by [`spectral_range`].
pub const SPECTRAL_PROBE_SEED: u64 = 0x005E_ED0F_5EC7;

/// A cached eigendecomposition of an operator, reusable across functions and
/// vectors.
#[derive(Debug, Clone)]
pub struct ExactOracle {
    eig: EigenDecomposition,
}

impl ExactOracle {
    pub fn new(a: &SymmetricOperator) -> Result<Self> {
        Self::with_cap(a, ORACLE_CAP)
    }

    pub fn with_cap(a: &SymmetricOperator, cap: usize) -> Result<Self> {
        let n = a.dim();
        if n > cap {
            return Err(Error::Capacity {
                what: "oracle dimension",
                requested: n,
                limit: cap,
            });
        }
        let eig = match a.storage() {
            Storage::Diagonal(d) => EigenDecomposition {
                values: d.clone(),
                vectors: crate::linalg::dense::DenseMatrix::identity(n),
            }
            .sort_ascending(),
            _ => symmetric_eigen(&a.materialize())?,
        };
        Ok(Self { eig })
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eig
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eig.values
    }

    pub fn lambda_min(&self) -> f64 {
        self.eig.values[0]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eig.values.last().expect("nonempty spectrum")
    }

    /// `‖A‖₂ = max |λ|`.
    pub fn norm(&self) -> f64 {
        self.lambda_min().abs().max(self.lambda_max().abs())
    }

    /// `V f(Λ) Vᵀ x`.
    pub fn apply(&self, f: &ScalarFunction, x: &[f64]) -> Result<Vec<f64>> {
        let v = &self.eig.vectors;
        let n = self.eig.values.len();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.len(),
            });
        }
        let mut coeff = v.matvec_transpose(x)?;
        for (c, lam) in coeff.iter_mut().zip(&self.eig.values) {
            *c *= f.eval_checked(*lam)?;
        }
        v.matvec(&coeff)
    }
}

/// `f(A)x` by full eigendecomposition, limited to [`ORACLE_CAP`].
pub fn exact_matrix_function(a: &SymmetricOperator, f: &ScalarFunction, x: &[f64]) -> Result<Vec<f64>> {
    ExactOracle::new(a)?.apply(f, x)
}

/// Extreme Ritz values of a `probe_iters`-step Lanczos run from a seeded
/// random start, each widened outward by `margin·‖T‖`.
pub fn spectral_range(a: &SymmetricOperator, probe_iters: usize, margin: f64) -> Result<(f64, f64)> {
    if probe_iters < 1 {
        return Err(Error::Structural(
            "spectral_range needs at least one probe iteration".into(),
        ));
    }
    let x = crate::random::gaussian_vector(&mut crate::random::rng(SPECTRAL_PROBE_SEED), a.dim());
    let dec = lanczos(a, &x, probe_iters)?;
    let ritz = dec.ritz_values()?;
    let lo = ritz[0];
    let hi = *ritz.last().expect("at least one Ritz value");
    let t_norm = lo.abs().max(hi.abs());
    Ok((lo - margin * t_norm, hi + margin * t_norm))
}
