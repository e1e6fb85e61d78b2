//! One study per command. Each returns its CSV rows and a JSON summary.

use lanczos_core::applications::step::{soft_step_apply, soft_step_scalar, StepParams};
use lanczos_core::applications::topsv::top_singular_value;
use lanczos_core::applications::{matrix_exp_apply, matrix_exp_psd_apply};
use lanczos_core::arith::{norm2, sub_vec};
use lanczos_core::cg::{cg_solve, lanczos_cg_equivalence};
use lanczos_core::lanczos::{apply_function, lanczos};
use lanczos_core::linalg::ExactOracle;
use lanczos_core::lowerbound::{min_degree_scan, potential_sweep, HardSpectrum};
use lanczos_core::polyapprox::minimax::MAX_MINIMAX_DEGREE;
use lanczos_core::polyapprox::{minimax, IntervalUnion};
use lanczos_core::precision::{
    apply_emulated, function_error_bound, lanczos_emulated, paige_report_with, PrecisionConfig,
};
use lanczos_core::random::{derive_seed, gaussian_vector, rng};
use lanczos_core::{Error, Execution, ScalarFunction, SymmetricOperator};
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::source::{load_rectangular, load_symmetric, VECTOR_STREAM};
use crate::RunError;

/// Relative slack on every theoretical bound.
pub const BOUND_SLACK: f64 = 1e-6;
/// Absolute roundoff allowance, relative to the input norm.
pub const ROUNDOFF: f64 = 1e-8;

pub struct Study {
    /// Schema tag written in the CSV header comment.
    pub schema: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub summary: Value,
    pub passed: bool,
}

pub fn num(v: f64) -> String {
    format!("{v:e}")
}

fn flag(b: bool) -> String {
    b.to_string()
}

fn start_vector(cfg: &ExperimentConfig, n: usize) -> Vec<f64> {
    gaussian_vector(&mut rng(derive_seed(cfg.seed, VECTOR_STREAM)), n)
}

fn source_of(cfg: &ExperimentConfig) -> Result<SymmetricOperator, RunError> {
    let src = cfg.source.as_ref().expect("validated");
    load_symmetric(src, cfg.seed)
}

/// Minimax error of degree `k − 1` (capped) for `f` on `[lo, hi]`; zero for
/// a single point.
fn delta_on(f: &ScalarFunction, lo: f64, hi: f64, k: usize) -> Result<f64, Error> {
    if hi - lo <= 1e-14 * lo.abs().max(hi.abs()).max(1.0) {
        return Ok(0.0);
    }
    let degree = (k - 1).min(MAX_MINIMAX_DEGREE);
    Ok(minimax(f, &IntervalUnion::single(lo, hi)?, degree, None)?.delta)
}

pub fn run_study(cfg: &ExperimentConfig) -> Result<Study, RunError> {
    match cfg.command.as_str() {
        "apply" => apply(cfg),
        "solve" => solve(cfg),
        "exp" => exp(cfg),
        "step" => step(cfg),
        "topsv" => topsv(cfg),
        "lowerbound" => lowerbound(cfg),
        "precision-sweep" => precision_sweep(cfg),
        "paige-check" => paige_check(cfg),
        other => unreachable!("validated command {other}"),
    }
}

fn apply(cfg: &ExperimentConfig) -> Result<Study, RunError> {
    let a = source_of(cfg)?;
    let f = ScalarFunction::by_name(&cfg.function)?;
    let x = start_vector(cfg, a.dim());
    let oracle = ExactOracle::new(&a)?;
    let exact = oracle.apply(&f, &x)?;
    let dec = lanczos(&a, &x, cfg.k)?;
    let y = apply_function(&dec, &f, dec.x_norm)?;
    let xn = norm2(&x);
    let error = norm2(&sub_vec(&exact, &y));
    let delta = delta_on(&f, oracle.lambda_min(), oracle.lambda_max(), cfg.k)?;
    let bound = 2.0 * delta * xn;
    let allowance = ROUNDOFF * xn;
    let passed = error <= bound * (1.0 + BOUND_SLACK) + allowance;
    Ok(Study {
        schema: "apply/1",
        header: vec!["function", "k", "steps", "error", "bound", "allowance", "pass"],
        rows: vec![vec![
            f.name().to_string(),
            cfg.k.to_string(),
            dec.steps_taken.to_string(),
            num(error),
            num(bound),
            num(allowance),
            flag(passed),
        ]],
        summary: json!({
            "function": f.name(),
            "k": cfg.k,
            "steps": dec.steps_taken,
            "breakdown": dec.breakdown,
            "error": error,
            "delta_k": delta,
            "bound": bound,
        }),
        passed,
    })
}

fn distinct_eigenvalues(values: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(values.len());
    for &v in values {
        match out.last() {
            Some(&p) if v - p <= 1e-12 * v.abs().max(1.0) => {}
            _ => out.push(v),
        }
    }
    out
}

fn solve(cfg: &ExperimentConfig) -> Result<Study, RunError> {
    let a = source_of(cfg)?;
    let n = a.dim();
    let oracle = ExactOracle::new(&a)?;
    if !(oracle.lambda_min() > 0.0) {
        return Err(Error::Domain(format!(
            "solve needs a positive definite matrix, lambda_min = {}",
            oracle.lambda_min()
        ))
        .into());
    }
    let kappa = oracle.lambda_max() / oracle.lambda_min();
    let b = start_vector(cfg, n);
    let bn = norm2(&b);
    let exact = oracle.apply(&ScalarFunction::inverse(), &b)?;
    let points = IntervalUnion::around_points(&distinct_eigenvalues(oracle.eigenvalues()), 0.0, 2)?;
    let kmax = cfg.k.min(n).min(MAX_MINIMAX_DEGREE + 1);
    let mut rows = Vec::new();
    let mut passed = true;
    for k in 1..=kmax {
        let y = cg_solve(&a, &b, k, 0.0)?.solution(n);
        let error = norm2(&sub_vec(&exact, &y));
        let equivalence = lanczos_cg_equivalence(&a, &b, k)?;
        let delta_bar = minimax(&ScalarFunction::inverse(), &points, k - 1, None)?.delta;
        let bound = kappa.sqrt() * delta_bar * bn;
        let allowance = ROUNDOFF * norm2(&exact);
        let ok = error <= bound * (1.0 + BOUND_SLACK) + allowance && equivalence <= 1e-8;
        passed &= ok;
        rows.push(vec![
            k.to_string(),
            num(error),
            num(bound),
            num(equivalence),
            num(1e-8),
            flag(ok),
        ]);
    }
    Ok(Study {
        schema: "solve/1",
        header: vec!["k", "error", "bound", "equivalence", "equivalence_bound", "pass"],
        rows,
        summary: json!({ "kappa": kappa, "n": n, "k_max": kmax }),
        passed,
    })
}

fn exp(cfg: &ExperimentConfig) -> Result<Study, RunError> {
    let a = source_of(cfg)?;
    let x = start_vector(cfg, a.dim());
    let oracle = ExactOracle::new(&a)?;
    let xn = norm2(&x);
    let (variant, y, exact, bound) = match cfg.function.as_str() {
        "exp" => {
            let y = matrix_exp_apply(&a, &x, cfg.eps)?;
            let exact = oracle.apply(&ScalarFunction::exp(), &x)?;
            ("general", y, exact, cfg.eps * (2.0 * oracle.norm()).exp() * xn)
        }
        "neg-exp" => {
            if oracle.lambda_min() < -1e-12 * oracle.norm().max(1.0) {
                return Err(Error::Domain("neg-exp needs a positive semidefinite matrix".into()).into());
            }
            let y = matrix_exp_psd_apply(&a, &x, cfg.eps)?;
            let exact = oracle.apply(&ScalarFunction::by_name("neg-exp")?, &x)?;
            ("psd", y, exact, cfg.eps * xn)
        }
        other => return Err(Error::Domain(format!("exp accepts --function exp or neg-exp, not `{other}`")).into()),
    };
    let error = norm2(&sub_vec(&exact, &y));
    let passed = error <= bound * (1.0 + BOUND_SLACK);
    Ok(Study {
        schema: "exp/1",
        header: vec!["variant", "eps", "error", "bound", "pass"],
        rows: vec![vec![variant.into(), num(cfg.eps), num(error), num(bound), flag(passed)]],
        summary: json!({ "variant": variant, "error": error, "bound": bound, "a_norm": oracle.norm() }),
        passed,
    })
}

fn step(cfg: &ExperimentConfig) -> Result<Study, RunError> {
    let params = StepParams::new(cfg.gamma, cfg.eps)?;
    let m = 10_000;
    let (mut low, mut high, mut mid) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..=m {
        let x = -0.5 + i as f64 / m as f64;
        let s = soft_step_scalar(x, params.q);
        if x <= -cfg.gamma {
            low = low.max(s.abs());
        } else if x >= cfg.gamma {
            high = high.max((1.0 - s).abs());
        } else {
            mid = mid.max((-s).max(s - 1.0).max(0.0));
        }
    }
    let b = source_of(cfg)?;
    let x = start_vector(cfg, b.dim());
    let y = soft_step_apply(&b, &x, &params, None)?;
    let exact = ExactOracle::new(&b)?.apply(&params.function(), &x)?;
    let apply_err = norm2(&sub_vec(&exact, &y));
    let apply_bound = cfg.eps * norm2(&x);
    let checks = [
        ("grid-below", low, cfg.eps),
        ("grid-above", high, cfg.eps),
        ("grid-transition", mid, 0.0),
        ("apply", apply_err, apply_bound),
    ];
    let mut passed = true;
    let rows = checks
        .iter()
        .map(|&(name, measured, bound)| {
            let ok = measured <= bound;
            passed &= ok;
            vec![name.to_string(), num(measured), num(bound), flag(ok)]
        })
        .collect();
    Ok(Study {
        schema: "step/1",
        header: vec!["check", "measured", "bound", "pass"],
        rows,
        summary: json!({ "gamma": cfg.gamma, "eps": cfg.eps, "q": params.q, "k": params.k }),
        passed,
    })
}

fn topsv(cfg: &ExperimentConfig) -> Result<Study, RunError> {
    let b = load_rectangular(cfg.source.as_ref().expect("validated"), cfg.seed)?;
    let sigma = b.spectral_norm()?;
    let threshold = (1.0 - cfg.delta) * sigma;
    let r = top_singular_value(&b, cfg.delta, cfg.trials, cfg.seed, Execution::Parallel)?;
    let mut successes = 0usize;
    let rows = r
        .trials
        .iter()
        .enumerate()
        .map(|(t, o)| {
            let ok = o.ratio >= threshold;
            successes += ok as usize;
            vec![t.to_string(), num(o.ratio), num(threshold), flag(ok)]
        })
        .collect();
    let fraction = successes as f64 / cfg.trials as f64;
    let floor = 0.5 - 3.0 * (0.25 / cfg.trials as f64).sqrt();
    let passed = fraction >= floor && r.sigma_est >= threshold;
    Ok(Study {
        schema: "topsv/1",
        header: vec!["trial", "ratio", "threshold", "pass"],
        rows,
        summary: json!({
            "sigma": sigma,
            "sigma_est": r.sigma_est,
            "best_trial": r.best_trial,
            "success_fraction": fraction,
            "success_floor": floor,
            "k": r.k,
            "q": r.q,
        }),
        passed,
    })
}

fn lowerbound(cfg: &ExperimentConfig) -> Result<Study, RunError> {
    let strict_eta = 1.0 / (20.0 * cfg.kappa * cfg.kappa);
    let eta = cfg.eta.unwrap_or(strict_eta);
    let spec = HardSpectrum::relaxed(cfg.kappa, eta)?;
    let scan = min_degree_scan(&spec, cfg.target, cfg.kmax - 1, Execution::Parallel)?;
    let mut rows: Vec<Vec<String>> = scan
        .curve
        .iter()
        .map(|&(d, delta)| {
            vec![
                "delta_bar".into(),
                (d + 1).to_string(),
                num(delta),
                num(cfg.target),
                flag(delta <= cfg.target),
            ]
        })
        .collect();
    let mut passed = true;
    let mut potential_min = None;
    if eta <= strict_eta {
        let floor = spec.potential_floor();
        let tol = 1e-6 * spec.eta * spec.z as f64;
        let sweep = potential_sweep(&spec, cfg.c, cfg.count, Execution::Parallel)?;
        for (r, v) in &sweep {
            let ok = *v >= floor - tol;
            passed &= ok;
            rows.push(vec!["potential".into(), num(*r), num(*v), num(floor), flag(ok)]);
        }
        potential_min = sweep.iter().map(|&(_, v)| v).reduce(f64::min);
    }
    let curve: Vec<Value> = scan
        .curve
        .iter()
        .map(|&(d, v)| json!({ "k": d + 1, "delta_bar": v }))
        .collect();
    Ok(Study {
        schema: "lowerbound/1",
        header: vec!["kind", "parameter", "measured", "bound", "pass"],
        rows,
        summary: json!({
            "kappa": cfg.kappa,
            "eta": eta,
            "z": spec.z,
            "capped": spec.is_capped(),
            "point_count": spec.point_count(),
            "target": cfg.target,
            "min_degree": scan.min_degree,
            "min_k": scan.min_degree.map(|d| d + 1),
            "delta_bar_curve": curve,
            "potential_min": potential_min,
            "potential_floor": spec.potential_floor(),
        }),
        passed,
    })
}

fn precision_sweep(cfg: &ExperimentConfig) -> Result<Study, RunError> {
    let a = source_of(cfg)?;
    let f = ScalarFunction::by_name(&cfg.function)?;
    let x = start_vector(cfg, a.dim());
    let xn = norm2(&x);
    let oracle = ExactOracle::new(&a)?;
    let eta = cfg.eta.unwrap_or(oracle.norm());
    let (lo, hi) = (oracle.lambda_min() - eta, oracle.lambda_max() + eta);
    let c = f.sampled_sup(lo, hi)?;
    if !c.is_finite() {
        return Err(Error::Domain(format!(
            "{} is unbounded on [{lo}, {hi}]; choose a smaller --eta",
            f.name()
        ))
        .into());
    }
    let exact = oracle.apply(&f, &x)?;
    let mut rows = Vec::new();
    let mut passed = true;
    let mut defects = Vec::new();
    for &bits in &cfg.bits {
        let pc = PrecisionConfig::new(bits)?;
        let (dec, diag) = lanczos_emulated(&a, &x, cfg.k, pc)?;
        let y = apply_emulated(&a, &f, &x, cfg.k, pc)?;
        let error = norm2(&sub_vec(&exact, &y));
        let eps_b = (-(bits as f64) / 2.0).exp2();
        let delta = delta_on(&f, lo, hi, dec.steps_taken)?;
        let bound = function_error_bound(dec.steps_taken, delta, eps_b, c) * xn;
        let ok = error <= bound;
        passed &= ok;
        defects.push(json!({ "bits": bits, "orthogonality_defect": diag.orthogonality_defect }));
        rows.push(vec![
            bits.to_string(),
            num(pc.epsilon()),
            dec.steps_taken.to_string(),
            num(diag.orthogonality_defect),
            num(diag.three_term_residual),
            num(diag.max_q_norm_drift()),
            num(error),
            num(bound),
            flag(ok),
        ]);
    }
    Ok(Study {
        schema: "precision-sweep/1",
        header: vec![
            "bits",
            "eps_mach",
            "steps",
            "orthogonality_defect",
            "three_term_residual",
            "q_norm_drift",
            "error",
            "bound",
            "pass",
        ],
        rows,
        summary: json!({ "function": f.name(), "eta": eta, "c": c, "defects": defects }),
        passed,
    })
}

fn paige_check(cfg: &ExperimentConfig) -> Result<Study, RunError> {
    let a = source_of(cfg)?;
    let n = a.dim();
    let oracle = ExactOracle::new(&a)?;
    let spectrum = (oracle.lambda_min(), oracle.lambda_max());
    let mut rows = Vec::new();
    let mut passed = true;
    let mut worst = Vec::new();
    for &bits in &cfg.bits {
        let pc = PrecisionConfig::new(bits)?;
        let reports = Execution::Parallel.map(cfg.trials, |t| -> Result<_, Error> {
            let x = gaussian_vector(&mut rng(derive_seed(cfg.seed, 1000 + t as u64)), n);
            let (_, diag) = lanczos_emulated(&a, &x, cfg.k, pc)?;
            Ok(paige_report_with(&diag, spectrum, pc))
        });
        let mut max_ratio = 0.0f64;
        for (t, rep) in reports.into_iter().enumerate() {
            let rep = rep?;
            max_ratio = max_ratio.max(rep.max_ratio());
            for ch in &rep.checks {
                passed &= ch.passed;
                rows.push(vec![
                    bits.to_string(),
                    t.to_string(),
                    ch.name.to_string(),
                    num(ch.measured),
                    num(ch.bound),
                    num(ch.ratio),
                    flag(ch.passed),
                ]);
            }
        }
        worst.push(json!({ "bits": bits, "max_ratio": max_ratio }));
    }
    Ok(Study {
        schema: "paige-check/1",
        header: vec!["bits", "trial", "check", "measured", "bound", "ratio", "pass"],
        rows,
        summary: json!({ "k": cfg.k, "n": n, "trials": cfg.trials, "max_ratios": worst }),
        passed,
    })
}
