//! Hard spectra for linear systems: `z` evenly spaced eigenvalues in each
//! dyadic interval `(2^{−i}, 2^{−i+1}]`, small intervals around them, and the
//! potential integrals that control polynomials on those intervals.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::linalg::operator::SymmetricOperator;
use crate::par::Execution;
use crate::polyapprox::domain::{IntervalUnion, DEFAULT_GRID};
use crate::polyapprox::minimax::{degree_scan, minimax, DegreeScan};

/// Default cap on the number of eigenvalues per dyadic interval.
pub const DEFAULT_Z_MAX: usize = 60;

/// Constant of the potential lower bound `−377·η·z`.
pub const POTENTIAL_CONSTANT: f64 = 377.0;

const GL_NODES: usize = 64;

#[derive(Debug, Clone)]
pub struct HardSpectrum {
    pub kappa: f64,
    pub eta: f64,
    /// Eigenvalues per dyadic interval actually used.
    pub z: usize,
    /// `⌈ln 1/η⌉` before capping.
    pub z_uncapped: usize,
    /// `⌊log₂ κ⌋`.
    pub levels: usize,
    /// `λ_{i,j}` ordered by `i`, then `j`.
    pub eigenvalues: Vec<f64>,
    pub intervals: IntervalUnion,
}

/// `⌈ln 1/η⌉`, treating values within `1e−9` of an integer as that integer.
pub fn z_for_eta(eta: f64) -> usize {
    let v = (1.0 / eta).ln();
    let r = v.round();
    let z = if (v - r).abs() <= 1e-9 { r } else { v.ceil() };
    z.max(1.0) as usize
}

/// `⌊log₂ κ⌋`, exact for powers of two.
pub fn dyadic_levels(kappa: f64) -> usize {
    let v = kappa.log2();
    let r = v.round();
    (if (v - r).abs() <= 1e-12 { r } else { v.floor() }) as usize
}

/// `λ_{i,j} = 2^{−i} + j/(z·2^i)` for `i = 1..⌊log₂ κ⌋`, `j = 1..z`.
pub fn hard_eigenvalues(kappa: f64, z: usize) -> Vec<f64> {
    let levels = dyadic_levels(kappa);
    let mut out = Vec::with_capacity(levels * z);
    for i in 1..=levels {
        let base = (-(i as f64)).exp2();
        for j in 1..=z {
            out.push(base + j as f64 * base / z as f64);
        }
    }
    out
}

/// Hard spectrum with `0 < η ≤ 1/(20κ²)` and `z` capped at [`DEFAULT_Z_MAX`].
pub fn hard_spectrum(kappa: f64, eta: f64) -> Result<HardSpectrum> {
    HardSpectrum::build(kappa, eta, DEFAULT_Z_MAX, true)
}

impl HardSpectrum {
    /// Same construction, only requiring that the intervals be disjoint.
    pub fn relaxed(kappa: f64, eta: f64) -> Result<Self> {
        Self::build(kappa, eta, DEFAULT_Z_MAX, false)
    }

    pub fn build(kappa: f64, eta: f64, z_max: usize, strict: bool) -> Result<Self> {
        if !(kappa >= 2.0) || !kappa.is_finite() {
            return Err(Error::Domain(format!("kappa {kappa} must be at least 2")));
        }
        if !(eta > 0.0) {
            return Err(Error::Domain(format!("eta {eta} must be positive")));
        }
        let eta_max = 1.0 / (20.0 * kappa * kappa);
        if strict && eta > eta_max {
            return Err(Error::Domain(format!("eta {eta} exceeds 1/(20 kappa^2) = {eta_max}")));
        }
        if z_max < 1 {
            return Err(Error::Domain("z_max must be at least 1".into()));
        }
        let z_uncapped = z_for_eta(eta);
        let z = z_uncapped.min(z_max);
        let eigenvalues = hard_eigenvalues(kappa, z);
        let intervals = IntervalUnion::around_points(&eigenvalues, eta, DEFAULT_GRID)?;
        Ok(Self {
            kappa,
            eta,
            z,
            z_uncapped,
            levels: dyadic_levels(kappa),
            eigenvalues,
            intervals,
        })
    }

    pub fn is_capped(&self) -> bool {
        self.z < self.z_uncapped
    }

    /// `⌊log₂ κ⌋·z`, the number of eigenvalues.
    pub fn point_count(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn operator(&self) -> SymmetricOperator {
        SymmetricOperator::diagonal(self.eigenvalues.clone()).expect("nonempty finite spectrum")
    }

    /// Smallest distance between neighbouring intervals.
    pub fn min_gap(&self) -> f64 {
        self.intervals
            .intervals()
            .windows(2)
            .map(|w| w[1].0 - w[0].1)
            .fold(f64::INFINITY, f64::min)
    }

    /// The eigenvalues alone, as point intervals.
    pub fn points(&self) -> IntervalUnion {
        IntervalUnion::around_points(&self.eigenvalues, 0.0, 2).expect("distinct eigenvalues")
    }

    /// `−377·η·z`.
    pub fn potential_floor(&self) -> f64 {
        -POTENTIAL_CONSTANT * self.eta * self.z as f64
    }

    /// Level `i` (1-based) of position `idx` in the ascending interval list.
    fn level_of(&self, idx: usize) -> usize {
        self.levels - idx / self.z
    }

    /// Position of `R_{i,j}` in the ascending interval list.
    fn bucket_index(&self, i: usize, j: usize) -> usize {
        (self.levels - i) * self.z + (j - 1)
    }
}

/// `δ̄_k`: minimax error of degree `k − 1` polynomials against `1/x` on the
/// spectrum's intervals.
pub fn delta_bar_probe(spec: &HardSpectrum, k: usize) -> Result<f64> {
    delta_bar_on(&spec.intervals, k)
}

/// `δ̄_k` on an arbitrary domain.
pub fn delta_bar_on(domain: &IntervalUnion, k: usize) -> Result<f64> {
    if k < 1 {
        return Err(Error::Structural("k must be at least 1".into()));
    }
    Ok(minimax(&ScalarFunction::inverse(), domain, k - 1, None)?.delta)
}

/// Degree scan of `1/x` on the spectrum's intervals down to `target`.
pub fn min_degree_scan(spec: &HardSpectrum, target: f64, k_max: usize, exec: Execution) -> Result<DegreeScan> {
    degree_scan(&ScalarFunction::inverse(), &spec.intervals, target, k_max, None, exec)
}

/// `Σ_i 2^{ic} Σ_j ∫_{R_{i,j}} ln|1 − x/r| dx`.
pub fn potential_check(spec: &HardSpectrum, r: f64, c: f64) -> Result<f64> {
    let lo = 1.0 / spec.kappa;
    let hi = 1.0 + spec.eta;
    if !(r >= lo * (1.0 - 1e-12) && r <= hi * (1.0 + 1e-12)) {
        return Err(Error::Domain(format!(
            "r = {r} outside [1/kappa, 1 + eta] = [{lo}, {hi}]"
        )));
    }
    if !(0.2..=0.5).contains(&c) {
        return Err(Error::Domain(format!("c = {c} outside [1/5, 1/2]")));
    }
    Ok(spec
        .intervals
        .intervals()
        .iter()
        .enumerate()
        .map(|(idx, &(a, b))| {
            let w = (spec.level_of(idx) as f64 * c).exp2();
            w * log_ratio_integral(a, b, r)
        })
        .sum())
}

/// Weighted integral over the single bucket `R_{i,j}` (1-based indices).
pub fn bucket_integral(spec: &HardSpectrum, i: usize, j: usize, r: f64, c: f64) -> Result<f64> {
    if i < 1 || i > spec.levels || j < 1 || j > spec.z {
        return Err(Error::Domain(format!("bucket ({i}, {j}) does not exist")));
    }
    let (a, b) = spec.intervals.intervals()[spec.bucket_index(i, j)];
    Ok((i as f64 * c).exp2() * log_ratio_integral(a, b, r))
}

/// `4·2^{ic}·η·ln η`, the floor for the bucket closest to `r`.
pub fn bucket_floor(spec: &HardSpectrum, i: usize, c: f64) -> f64 {
    4.0 * (i as f64 * c).exp2() * spec.eta * spec.eta.ln()
}

/// `(r, value)` for `count` log-spaced `r` in `[1/κ, 1 + η]`.
pub fn potential_sweep(spec: &HardSpectrum, c: f64, count: usize, exec: Execution) -> Result<Vec<(f64, f64)>> {
    let lo = 1.0 / spec.kappa;
    let hi = 1.0 + spec.eta;
    let rs: Vec<f64> = (0..count)
        .map(|t| {
            if count == 1 {
                lo
            } else {
                lo * (hi / lo).powf(t as f64 / (count - 1) as f64)
            }
        })
        .map(|r: f64| r.clamp(lo, hi))
        .collect();
    exec.map_slice(&rs, |&r| potential_check(spec, r, c).map(|v| (r, v)))
        .into_iter()
        .collect()
}

/// `∫_a^b ln|1 − x/r| dx` for `r > 0`. Pieces closer to `r` than their own
/// width use the antiderivative of `ln|x − r|`; the rest use Gauss–Legendre.
pub fn log_ratio_integral(a: f64, b: f64, r: f64) -> f64 {
    let width = b - a;
    if width <= 0.0 {
        return 0.0;
    }
    let dist = if r < a {
        a - r
    } else if r > b {
        r - b
    } else {
        0.0
    };
    if dist < width {
        log_ratio_closed_form(a, b, r)
    } else {
        log_ratio_gauss(a, b, r)
    }
}

/// Closed form via `F(x) = (x − r) ln|x − r| − (x − r)`.
pub fn log_ratio_closed_form(a: f64, b: f64, r: f64) -> f64 {
    let prim = |x: f64| {
        let d = x - r;
        if d == 0.0 {
            0.0
        } else {
            d * d.abs().ln() - d
        }
    };
    prim(b) - prim(a) - (b - a) * r.ln()
}

/// 64-point Gauss–Legendre quadrature of `ln|1 − x/r|` on `[a, b]`.
pub fn log_ratio_gauss(a: f64, b: f64, r: f64) -> f64 {
    let (nodes, weights) = gauss_legendre();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    nodes
        .iter()
        .zip(weights)
        .map(|(t, w)| w * (1.0 - (mid + half * t) / r).abs().ln())
        .sum::<f64>()
        * half
}

fn gauss_legendre() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre_rule(GL_NODES))
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let pi = std::f64::consts::PI;
    for i in 0..n.div_ceil(2) {
        let mut x = (pi * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for m in 2..=n {
                let p2 = ((2 * m - 1) as f64 * x * p1 - (m - 1) as f64 * p0) / m as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalue_formula_examples() {
        let e = hard_eigenvalues(8.0, 2);
        let want = [0.75, 1.0, 0.375, 0.5, 0.1875, 0.25];
        assert_eq!(e, want);
        assert_eq!(z_for_eta((-2f64).exp()), 2);
        let s = HardSpectrum::relaxed(2.0, (-1f64).exp()).unwrap();
        assert_eq!((s.levels, s.z), (1, 1));
        assert_eq!(s.eigenvalues, vec![1.0]);
    }

    #[test]
    fn strict_range_enforced() {
        let err = hard_spectrum(8.0, 0.01).unwrap_err();
        assert_eq!(err.kind(), "domain");
        assert!(err.to_string().contains("1/(20 kappa^2)"));
        assert!(hard_spectrum(1.5, 1e-6).is_err());
    }

    #[test]
    fn gaps_and_range() {
        let s = hard_spectrum(8.0, 1.0 / (20.0 * 64.0)).unwrap();
        let need = 1.0 / (2.0 * s.z as f64 * 8.0);
        let e = &s.eigenvalues;
        for i in 0..e.len() {
            assert!(e[i] > 1.0 / 8.0 && e[i] <= 1.0);
            for j in 0..i {
                assert!((e[i] - e[j]).abs() - 2.0 * s.eta >= need);
            }
        }
        assert_eq!(s.point_count(), 3 * s.z);
    }

    #[test]
    fn z_cap_is_reported() {
        let s = HardSpectrum::build(4.0, 1e-30, 10, true).unwrap();
        assert!(s.is_capped());
        assert_eq!(s.z, 10);
        assert_eq!(s.z_uncapped, 70);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre_rule(64);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-13);
        let x10: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((x10 - 2.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn quadrature_routes_agree_away_from_r() {
        for &(a, b, r) in &[(0.5, 0.6, 0.1), (0.2, 0.21, 0.9), (1.0, 1.5, 0.25)] {
            let g = log_ratio_gauss(a, b, r);
            let c = log_ratio_closed_form(a, b, r);
            assert!((g - c).abs() < 1e-13 * (b - a), "{g} vs {c}");
        }
    }

    #[test]
    fn closest_bucket_floor() {
        let s = hard_spectrum(8.0, 1.0 / 1280.0).unwrap();
        let r = s.eigenvalues[s.z + 1];
        let v = bucket_integral(&s, 2, 2, r, 0.2).unwrap();
        assert!(v >= bucket_floor(&s, 2, 0.2) - 1e-6);
    }

    #[test]
    fn potential_argument_checks() {
        let s = hard_spectrum(8.0, 1.0 / 1280.0).unwrap();
        assert!(potential_check(&s, 0.01, 0.2).is_err());
        assert!(potential_check(&s, 0.5, 0.1).is_err());
        assert!(potential_check(&s, 1.0 + s.eta, 0.2).unwrap() >= s.potential_floor());
    }

    #[test]
    fn inverse_approximation_gives_constrained_polynomial() {
        let s = hard_spectrum(4.0, 1.0 / 320.0).unwrap();
        let k = 4;
        let res = minimax(&ScalarFunction::inverse(), &s.intervals, k - 1, None).unwrap();
        let hull_max = s.intervals.hull().1;
        let pbar = |x: f64| 1.0 - x * res.expansion.eval(x);
        assert!((pbar(0.0) - 1.0).abs() < 1e-12);
        let worst = s.intervals.grid().iter().map(|&x| pbar(x).abs()).fold(0.0, f64::max);
        assert!(worst <= hull_max * res.delta * (1.0 + 1e-9));
        let zero = ScalarFunction::constant(0.0);
        let constrained = minimax(&zero, &s.intervals, k, Some(1.0)).unwrap();
        assert!(constrained.delta <= hull_max * res.delta * (1.0 + 1e-6) + 1e-9);
    }
}
