//! Emulated reduced-precision arithmetic and the finite-precision Lanczos
//! diagnostics built on it.
//!
//! Only the significand is narrowed; the exponent range stays that of `f64`.

use crate::arith::{norm2, Arithmetic};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::lanczos::{
    apply_function_with, default_breakdown_tol, lanczos_core, orthogonality_defect, three_term_residual,
    LanczosDecomposition,
};
use crate::linalg::operator::SymmetricOperator;
use crate::linalg::oracle::ExactOracle;

pub const MIN_BITS: u32 = 4;
pub const MAX_BITS: u32 = 52;

/// Significand width of the emulated arithmetic; rounding is always
/// round-to-nearest, ties to even.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionConfig {
    mantissa_bits: u32,
}

impl PrecisionConfig {
    pub fn new(mantissa_bits: u32) -> Result<Self> {
        if !(MIN_BITS..=MAX_BITS).contains(&mantissa_bits) {
            return Err(Error::Domain(format!(
                "mantissa width {mantissa_bits} outside {MIN_BITS}..={MAX_BITS}"
            )));
        }
        Ok(Self { mantissa_bits })
    }

    pub fn double() -> Self {
        Self {
            mantissa_bits: MAX_BITS,
        }
    }

    pub fn mantissa_bits(&self) -> u32 {
        self.mantissa_bits
    }

    /// `ε_mach = 2^{−bits}`.
    pub fn epsilon(&self) -> f64 {
        (-(self.mantissa_bits as f64)).exp2()
    }
}

/// Rounds `x` to `mantissa_bits` fraction bits, nearest with ties to even.
pub fn round_to(x: f64, cfg: PrecisionConfig) -> f64 {
    round_bits(x, cfg.mantissa_bits)
}

#[inline]
fn round_bits(x: f64, bits: u32) -> f64 {
    if bits >= MAX_BITS || !x.is_finite() {
        return x;
    }
    let shift = MAX_BITS - bits;
    let u = x.to_bits();
    let mask = (1u64 << shift) - 1;
    let low = u & mask;
    let half = 1u64 << (shift - 1);
    let mut kept = u & !mask;
    if low > half || (low == half && (kept >> shift) & 1 == 1) {
        kept += 1u64 << shift;
    }
    f64::from_bits(kept)
}

/// [`Arithmetic`] that rounds every result with [`round_to`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Emulated {
    pub cfg: PrecisionConfig,
}

impl Emulated {
    pub fn new(cfg: PrecisionConfig) -> Self {
        Self { cfg }
    }
}

impl Arithmetic for Emulated {
    #[inline]
    fn round(&self, x: f64) -> f64 {
        round_bits(x, self.cfg.mantissa_bits)
    }

    fn epsilon(&self) -> f64 {
        self.cfg.epsilon()
    }
}

/// `fl(A v)` with every product and partial sum rounded.
pub fn matvec_emulated(a: &SymmetricOperator, v: &[f64], cfg: PrecisionConfig) -> Result<Vec<f64>> {
    a.checked_matvec_with(v, &Emulated::new(cfg))
}

/// Quantities bounded by the finite-precision Lanczos theory.
#[derive(Debug, Clone, PartialEq)]
pub struct LanczosDiagnostics {
    pub three_term_residual: f64,
    pub orthogonality_defect: f64,
    pub ritz_min: f64,
    pub ritz_max: f64,
    /// `|‖q_i‖ − 1|` for every stored basis vector, including `q_{k+1}` when
    /// `β_{k+1} > 0`.
    pub q_norm_drift: Vec<f64>,
    pub steps: usize,
    pub n: usize,
}

impl LanczosDiagnostics {
    pub fn measure(dec: &LanczosDecomposition, a: &SymmetricOperator) -> Result<Self> {
        let ritz = dec.ritz_values()?;
        let mut drift: Vec<f64> = dec.basis.iter().map(|q| (norm2(q) - 1.0).abs()).collect();
        if dec.beta_next > 0.0 {
            drift.push((norm2(&dec.q_next) - 1.0).abs());
        }
        Ok(Self {
            three_term_residual: three_term_residual(dec, a)?,
            orthogonality_defect: orthogonality_defect(dec),
            ritz_min: ritz[0],
            ritz_max: *ritz.last().expect("k >= 1"),
            q_norm_drift: drift,
            steps: dec.steps_taken,
            n: dec.dim(),
        })
    }

    pub fn max_q_norm_drift(&self) -> f64 {
        self.q_norm_drift.iter().copied().fold(0.0, f64::max)
    }
}

/// Lanczos with every scalar operation, including those inside the
/// matrix-vector product, rounded to `cfg`.
pub fn lanczos_emulated(
    a: &SymmetricOperator,
    x: &[f64],
    k: usize,
    cfg: PrecisionConfig,
) -> Result<(LanczosDecomposition, LanczosDiagnostics)> {
    let dec = lanczos_decompose_emulated(a, x, k, cfg)?;
    let diag = LanczosDiagnostics::measure(&dec, a)?;
    Ok((dec, diag))
}

/// The decomposition alone, without measuring diagnostics.
pub fn lanczos_decompose_emulated(
    a: &SymmetricOperator,
    x: &[f64],
    k: usize,
    cfg: PrecisionConfig,
) -> Result<LanczosDecomposition> {
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: x.len(),
        });
    }
    let ar = Emulated::new(cfg);
    lanczos_core(
        |v| Ok(a.matvec_with(v, &ar)),
        x,
        k,
        default_breakdown_tol(a.dim()),
        a.norm_hint(),
        &ar,
    )
}

/// `‖x‖·Q f(T) e₁` from an emulated run, with the final combination rounded.
pub fn apply_emulated(
    a: &SymmetricOperator,
    f: &ScalarFunction,
    x: &[f64],
    k: usize,
    cfg: PrecisionConfig,
) -> Result<Vec<f64>> {
    let dec = lanczos_decompose_emulated(a, x, k, cfg)?;
    apply_function_with(&dec, f, dec.x_norm, &Emulated::new(cfg))
}

/// `(7k·δ_k + ε·C)`, the relative error bound for finite-precision Lanczos.
pub fn function_error_bound(k: usize, delta_k: f64, eps: f64, c: f64) -> f64 {
    7.0 * k as f64 * delta_k + eps * c
}

/// One inequality of the finite-precision Lanczos theory.
#[derive(Debug, Clone, PartialEq)]
pub struct PaigeCheck {
    pub name: &'static str,
    pub measured: f64,
    pub bound: f64,
    pub ratio: f64,
    pub passed: bool,
}

impl PaigeCheck {
    fn new(name: &'static str, measured: f64, bound: f64) -> Self {
        Self {
            name,
            measured,
            bound,
            ratio: measured / bound,
            passed: measured <= bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaigeReport {
    pub mantissa_bits: u32,
    pub epsilon: f64,
    pub a_norm: f64,
    pub checks: Vec<PaigeCheck>,
}

impl PaigeReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn max_ratio(&self) -> f64 {
        self.checks.iter().map(|c| c.ratio).fold(0.0, f64::max)
    }

    pub fn check(&self, name: &str) -> Option<&PaigeCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Evaluates the residual, basis-norm and Ritz-containment bounds against
/// the exact spectrum of `a`.
pub fn paige_report(diag: &LanczosDiagnostics, a: &SymmetricOperator, cfg: PrecisionConfig) -> Result<PaigeReport> {
    let oracle = ExactOracle::new(a)?;
    Ok(paige_report_with(diag, (oracle.lambda_min(), oracle.lambda_max()), cfg))
}

/// [`paige_report`] with the extreme eigenvalues supplied by the caller.
pub fn paige_report_with(diag: &LanczosDiagnostics, spectrum: (f64, f64), cfg: PrecisionConfig) -> PaigeReport {
    let (lmin, lmax) = spectrum;
    let a_norm = lmin.abs().max(lmax.abs());
    let eps = cfg.epsilon();
    let n = diag.n as f64;
    let k = diag.steps as f64;
    let n32 = n.powf(1.5);
    let e_bound = k * (2.0 * n32 + 7.0) * a_norm * eps;
    let q_bound = (n + 4.0) * eps;
    let eps1 = k.powf(2.5) * a_norm * (68.0 + 17.0 * n32) * eps;
    let ritz_excess = (lmin - diag.ritz_min).max(diag.ritz_max - lmax).max(0.0);
    PaigeReport {
        mantissa_bits: cfg.mantissa_bits(),
        epsilon: eps,
        a_norm,
        checks: vec![
            PaigeCheck::new("residual", diag.three_term_residual, e_bound),
            PaigeCheck::new("q-norm", diag.max_q_norm_drift(), q_bound),
            PaigeCheck::new("ritz-containment", ritz_excess, eps1),
        ],
    }
}
