//! Named scalar functions `f: ℝ → ℝ` with optional magnitude bounds.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Points used when certifying a magnitude bound.
pub const BOUND_GRID: usize = 10_000;

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct ScalarFunction {
    name: String,
    eval: Eval,
    bound_c: Option<f64>,
    interval: Option<(f64, f64)>,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("name", &self.name)
            .field("bound_c", &self.bound_c)
            .field("interval", &self.interval)
            .finish()
    }
}

impl ScalarFunction {
    pub fn from_fn<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            eval: Arc::new(f),
            bound_c: None,
            interval: None,
        }
    }

    pub fn exp() -> Self {
        Self::from_fn("exp", f64::exp)
    }

    /// `√x`, NaN for negative arguments.
    pub fn sqrt() -> Self {
        Self::from_fn("sqrt", f64::sqrt)
    }

    /// `1/x`.
    pub fn inverse() -> Self {
        Self::from_fn("inverse", |x| 1.0 / x)
    }

    pub fn identity() -> Self {
        Self::from_fn("identity", |x| x)
    }

    pub fn square() -> Self {
        Self::from_fn("square", |x| x * x)
    }

    pub fn constant(c: f64) -> Self {
        Self::from_fn(format!("constant({c})"), move |_| c)
    }

    /// Looks up one of the built-in functions by name.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "exp" => Ok(Self::exp()),
            "sqrt" => Ok(Self::sqrt()),
            "inverse" | "inv" => Ok(Self::inverse()),
            "identity" | "x" => Ok(Self::identity()),
            "square" => Ok(Self::square()),
            "neg-exp" => Ok(Self::from_fn("neg-exp", |x: f64| (-x).exp())),
            other => Err(Error::Domain(format!("unknown function '{other}'"))),
        }
    }

    /// Attaches a magnitude bound `C` on `[a, b]`, verified on a
    /// [`BOUND_GRID`]-point grid.
    pub fn with_bound(mut self, c: f64, interval: (f64, f64)) -> Result<Self> {
        let (a, b) = interval;
        if !(a <= b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
        }
        let sup = self.sampled_sup(a, b)?;
        if sup > c {
            return Err(Error::Domain(format!(
                "{}: sampled sup |f| = {sup} exceeds stated bound {c} on [{a}, {b}]",
                self.name
            )));
        }
        self.bound_c = Some(c);
        self.interval = Some(interval);
        Ok(self)
    }

    /// Sup of `|f|` over an evenly spaced [`BOUND_GRID`]-point grid on `[a, b]`.
    pub fn sampled_sup(&self, a: f64, b: f64) -> Result<f64> {
        let mut sup = 0.0f64;
        for i in 0..BOUND_GRID {
            let x = a + (b - a) * i as f64 / (BOUND_GRID - 1) as f64;
            sup = sup.max(self.eval_checked(x)?.abs());
        }
        Ok(sup)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bound_c(&self) -> Option<f64> {
        self.bound_c
    }

    pub fn interval(&self) -> Option<(f64, f64)> {
        self.interval
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// Evaluates `f(x)`, failing with a domain error if the value is not finite.
    pub fn eval_checked(&self, x: f64) -> Result<f64> {
        let y = (self.eval)(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Domain(format!(
                "{} is not finite at eigenvalue {x:e} (value {y})",
                self.name
            )))
        }
    }
}
