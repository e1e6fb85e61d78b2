//! Soft step function `s(x) = (1 + p_q(x))/2`, where `p_q` is the truncated
//! series `Σ_{i≤q} x(1 − x²)^i Π_{j≤i}(2j − 1)/(2j)` of `sign(x)`.

use crate::applications::{ceil_count, IterationConstants};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::lanczos::{apply_function, lanczos};
use crate::linalg::operator::LinearOperator;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams {
    pub gamma: f64,
    pub eps: f64,
    /// Series length.
    pub q: usize,
    /// Default Lanczos iteration count.
    pub k: usize,
}

impl StepParams {
    pub fn new(gamma: f64, eps: f64) -> Result<Self> {
        Self::with_constants(gamma, eps, &IterationConstants::default())
    }

    pub fn with_constants(gamma: f64, eps: f64, c: &IterationConstants) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 0.5) {
            return Err(Error::Domain(format!("gamma {gamma} outside (0, 1/2)")));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Domain(format!("eps {eps} outside (0, 1)")));
        }
        let q = ceil_count(c.step_q * (1.0 / eps).ln() / (gamma * gamma));
        let k = ceil_count(c.step_k * (1.0 / (eps * gamma)).ln() / gamma);
        Ok(Self { gamma, eps, q, k })
    }

    pub fn function(&self) -> ScalarFunction {
        let q = self.q;
        ScalarFunction::from_fn(format!("soft-step(q={q})"), move |x| soft_step_scalar(x, q))
    }
}

/// `p_q(x)` by the running product of the series terms.
pub fn sign_series(x: f64, q: usize) -> f64 {
    let damp = 1.0 - x * x;
    let mut term = x;
    let mut sum = x;
    for i in 1..=q {
        term *= damp * (2 * i - 1) as f64 / (2 * i) as f64;
        sum += term;
    }
    sum
}

/// `(1 + p_q(x))/2`. Partial sums of the series never leave `[−1, 1]`, so the
/// result is clamped to `[0, 1]` to remove rounding overshoot.
pub fn soft_step_scalar(x: f64, q: usize) -> f64 {
    (0.5 * (1.0 + sign_series(x, q))).clamp(0.0, 1.0)
}

/// Lanczos approximation of `s(B)x` for `‖B‖ ≤ 1/2`; `k` defaults to
/// `params.k`.
pub fn soft_step_apply<Op: LinearOperator + ?Sized>(
    b: &Op,
    x: &[f64],
    params: &StepParams,
    k: Option<usize>,
) -> Result<Vec<f64>> {
    match b.norm_hint() {
        Some(h) if h <= 0.5 => {}
        Some(h) => return Err(Error::Domain(format!("operator norm bound {h} exceeds 1/2"))),
        None => return Err(Error::Domain("soft step needs a norm bound of at most 1/2".into())),
    }
    let dec = lanczos(b, x, k.unwrap_or(params.k))?;
    apply_function(&dec, &params.function(), dec.x_norm)
}
