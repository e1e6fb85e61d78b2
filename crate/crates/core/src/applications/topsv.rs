//! Top singular value by Lanczos on `BᵀB` with the normalized power
//! `f(x) = (x/λ_max(T))^q` from random sign vectors.

use crate::applications::{ceil_count, IterationConstants};
use crate::arith::norm2;
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::lanczos::{apply_function, lanczos};
use crate::linalg::dense::DenseMatrix;
use crate::linalg::operator::SymmetricOperator;
use crate::par::Execution;
use crate::random::{derive_seed, rng, sign_vector};

/// Start vectors tried per trial before giving up on a degenerate output.
pub const MAX_RETRIES: u64 = 8;

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    /// `‖By‖/‖y‖`.
    pub ratio: f64,
    /// `‖y‖` before normalization.
    pub y_norm: f64,
    pub y: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct TopSingularValue {
    pub sigma_est: f64,
    /// Unit vector achieving `sigma_est`.
    pub u: Vec<f64>,
    pub best_trial: usize,
    /// Per-trial outcomes in trial order.
    pub trials: Vec<TrialOutcome>,
    pub k: usize,
    pub q: usize,
}

/// `(k, q)` for gap parameter `Δ` on an `n`-column matrix.
pub fn topsv_counts(n: usize, delta: f64, c: &IterationConstants) -> (usize, usize) {
    let log = (n as f64 / delta).ln();
    let k = ceil_count(c.topsv * (1.0 / delta).sqrt() * log);
    let q = ceil_count(4.0 / delta * log);
    (k, q)
}

/// Best of `trials` independent runs; trial `t` draws its start vector from
/// the stream `derive_seed(seed, t)`.
pub fn top_singular_value(
    b: &DenseMatrix,
    delta: f64,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<TopSingularValue> {
    top_singular_value_with(b, delta, trials, seed, exec, &IterationConstants::default())
}

pub fn top_singular_value_with(
    b: &DenseMatrix,
    delta: f64,
    trials: usize,
    seed: u64,
    exec: Execution,
    c: &IterationConstants,
) -> Result<TopSingularValue> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::Domain(format!("Delta {delta} outside (0, 1/2]")));
    }
    if trials < 1 {
        return Err(Error::Structural("at least one trial is required".into()));
    }
    let n = b.cols();
    let (k, q) = topsv_counts(n, delta, c);
    let gram = SymmetricOperator::gram(b.clone())?;
    let outcomes: Vec<Result<Option<TrialOutcome>>> =
        exec.map(trials, |t| run_trial(b, &gram, k, q, derive_seed(seed, t as u64)));
    let mut trials_out = Vec::with_capacity(trials);
    for o in outcomes {
        if let Some(t) = o? {
            trials_out.push(t);
        }
    }
    let (best_trial, best) = trials_out
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.ratio.total_cmp(&b.1.ratio))
        .ok_or_else(|| Error::Domain("every trial produced a zero vector".into()))?;
    Ok(TopSingularValue {
        sigma_est: best.ratio,
        u: best.y.clone(),
        best_trial,
        trials: trials_out.clone(),
        k,
        q,
    })
}

fn run_trial(
    b: &DenseMatrix,
    gram: &SymmetricOperator,
    k: usize,
    q: usize,
    trial_seed: u64,
) -> Result<Option<TrialOutcome>> {
    let n = b.cols();
    for attempt in 0..MAX_RETRIES {
        let z = sign_vector(&mut rng(derive_seed(trial_seed, attempt)), n);
        let dec = lanczos(gram, &z, k)?;
        let ritz = dec.ritz_values()?;
        let lmax = *ritz.last().expect("k >= 1");
        if !(lmax > 0.0) {
            continue;
        }
        let qi = q as i32;
        let f = ScalarFunction::from_fn("normalized-power", move |x: f64| (x / lmax).powi(qi));
        let mut y = apply_function(&dec, &f, dec.x_norm)?;
        let y_norm = norm2(&y);
        if !(y_norm > 0.0) {
            continue;
        }
        y.iter_mut().for_each(|v| *v /= y_norm);
        let ratio = norm2(&b.matvec(&y)?);
        return Ok(Some(TrialOutcome { ratio, y_norm, y }));
    }
    Ok(None)
}
