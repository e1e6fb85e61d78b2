//! Polynomials of the form `p(x) = Σ f_i(x)·g_i(x)^{e_i}` with low-degree
//! `f_i`, `g_i` and `|g_i| ≤ 1` on `[−1, 1]`, applied with far fewer Lanczos
//! iterations than their degree.

use crate::applications::{ceil_count, IterationConstants};
use crate::error::{Error, Result};
use crate::function::ScalarFunction;
use crate::lanczos::{apply_function, lanczos};
use crate::linalg::operator::LinearOperator;

/// Largest degree allowed for `f_i` and `g_i`.
pub const MAX_FACTOR_DEGREE: usize = 4;

/// Grid used to certify the term bounds.
pub const CERTIFY_GRID: usize = 10_000;

/// One term `f(x)·g(x)^power`, with monomial coefficients (constant first).
#[derive(Debug, Clone, PartialEq)]
pub struct AccelTerm {
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub power: usize,
    /// Certified bound on `|f|` over `[−1, 1]`.
    pub a: f64,
}

impl AccelTerm {
    pub fn eval(&self, x: f64) -> f64 {
        horner(&self.f, x) * horner(&self.g, x).powi(self.power as i32)
    }

    pub fn degree(&self) -> usize {
        poly_degree(&self.f) + self.power * poly_degree(&self.g)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccelPolySpec {
    terms: Vec<AccelTerm>,
    a_total: f64,
}

impl AccelPolySpec {
    /// Validates factor degrees and certifies `|g_i| ≤ 1`, `|f_i| ≤ a_i` on a
    /// grid of [`CERTIFY_GRID`] points in `[−1, 1]`.
    pub fn new(terms: Vec<AccelTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Structural("polynomial needs at least one term".into()));
        }
        for (idx, t) in terms.iter().enumerate() {
            if t.f.is_empty() || t.g.is_empty() {
                return Err(Error::Structural(format!("term {idx} has an empty factor")));
            }
            if t.f.len() > MAX_FACTOR_DEGREE + 1 || t.g.len() > MAX_FACTOR_DEGREE + 1 {
                return Err(Error::Structural(format!(
                    "term {idx} has a factor above degree {MAX_FACTOR_DEGREE}"
                )));
            }
            for i in 0..CERTIFY_GRID {
                let x = -1.0 + 2.0 * i as f64 / (CERTIFY_GRID - 1) as f64;
                let g = horner(&t.g, x).abs();
                let f = horner(&t.f, x).abs();
                if g > 1.0 + 1e-9 {
                    return Err(Error::Structural(format!("term {idx}: |g({x})| = {g} exceeds 1")));
                }
                if f > t.a + 1e-9 {
                    return Err(Error::Structural(format!(
                        "term {idx}: |f({x})| = {f} exceeds its bound {}",
                        t.a
                    )));
                }
            }
        }
        let a_total = terms.iter().map(|t| t.a).sum();
        Ok(Self { terms, a_total })
    }

    /// `p(x) = x^k`.
    pub fn monomial(k: usize) -> Result<Self> {
        Self::new(vec![AccelTerm {
            f: vec![1.0],
            g: vec![0.0, 1.0],
            power: k,
            a: 1.0,
        }])
    }

    /// `p(x) = 1`.
    pub fn constant_one() -> Result<Self> {
        Self::new(vec![AccelTerm {
            f: vec![1.0],
            g: vec![1.0],
            power: 0,
            a: 1.0,
        }])
    }

    pub fn terms(&self) -> &[AccelTerm] {
        &self.terms
    }

    /// `A = Σ a_i`.
    pub fn a_total(&self) -> f64 {
        self.a_total
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(AccelTerm::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    pub fn function(&self) -> ScalarFunction {
        let spec = self.clone();
        ScalarFunction::from_fn("accelerated-polynomial", move |x| spec.eval(x))
    }

    /// `⌈c·√(d·ln(d·A/ε))⌉` for degree `d`.
    pub fn iterations(&self, eps: f64, c: &IterationConstants) -> usize {
        let d = self.degree().max(1) as f64;
        let inner = (d * self.a_total / eps).ln().max(1.0);
        ceil_count(c.accel * (d * inner).sqrt())
    }
}

/// Lanczos approximation of `p(A)x` for `‖A‖ ≤ 1`. Returns `y` and the
/// iteration count used.
pub fn accelerated_poly_apply<Op: LinearOperator + ?Sized>(
    a: &Op,
    x: &[f64],
    spec: &AccelPolySpec,
    eps: f64,
) -> Result<(Vec<f64>, usize)> {
    accelerated_poly_apply_with(a, x, spec, eps, &IterationConstants::default())
}

pub fn accelerated_poly_apply_with<Op: LinearOperator + ?Sized>(
    a: &Op,
    x: &[f64],
    spec: &AccelPolySpec,
    eps: f64,
    c: &IterationConstants,
) -> Result<(Vec<f64>, usize)> {
    match a.norm_hint() {
        Some(h) if h <= 1.0 => {}
        Some(h) => return Err(Error::Domain(format!("operator norm bound {h} exceeds 1"))),
        None => {
            return Err(Error::Domain(
                "accelerated application needs a norm bound of at most 1".into(),
            ))
        }
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps {eps} outside (0, 1)")));
    }
    let q = spec.iterations(eps, c);
    let dec = lanczos(a, x, q)?;
    Ok((apply_function(&dec, &spec.function(), dec.x_norm)?, q))
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, ci| acc * x + ci)
}

fn poly_degree(c: &[f64]) -> usize {
    c.iter().rposition(|v| *v != 0.0).unwrap_or(0)
}
