//! Chebyshev polynomials and expansions on an interval.

use crate::error::{ensure_finite, Error, Result};
use crate::function::ScalarFunction;
use crate::linalg::operator::LinearOperator;

/// `T_i(x)` by the three-term recurrence.
pub fn cheb_t(i: usize, x: f64) -> f64 {
    match i {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut cur) = (1.0, x);
            for _ in 2..=i {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `U_i(x)` by the three-term recurrence, with `U_i = 0` for `i < 0`.
pub fn cheb_u(i: isize, x: f64) -> f64 {
    if i < 0 {
        return 0.0;
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    for _ in 0..i {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `T_0(x), …, T_d(x)`.
pub fn cheb_t_all(d: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(d + 1);
    out.push(1.0);
    if d >= 1 {
        out.push(x);
    }
    for i in 2..=d {
        let next = 2.0 * x * out[i - 1] - out[i - 2];
        out.push(next);
    }
    out
}

/// `m` Chebyshev–Lobatto points of `[a, b]`, ascending, endpoints included.
pub fn lobatto_points(a: f64, b: f64, m: usize) -> Vec<f64> {
    if m <= 1 || a == b {
        return vec![0.5 * (a + b)];
    }
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (0..m)
        .map(|j| {
            if j == 0 {
                a
            } else if j == m - 1 {
                b
            } else {
                mid - half * (std::f64::consts::PI * j as f64 / (m - 1) as f64).cos()
            }
        })
        .collect()
}

/// `Σ c_i T̄_i(x)` where `T̄_i` is `T_i` composed with the affine map of
/// `[a, b]` onto `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevExpansion {
    a: f64,
    b: f64,
    coeffs: Vec<f64>,
}

impl ChebyshevExpansion {
    pub fn new(interval: (f64, f64), coeffs: Vec<f64>) -> Result<Self> {
        let (a, b) = interval;
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain(format!("expansion interval [{a}, {b}] must have a < b")));
        }
        if coeffs.is_empty() {
            return Err(Error::Structural("expansion needs at least one coefficient".into()));
        }
        ensure_finite(&coeffs, "coefficients")?;
        Ok(Self { a, b, coeffs })
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Index of the last nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != 0.0).unwrap_or(0)
    }

    /// Maps `x` from `[a, b]` to `[−1, 1]`.
    #[inline]
    pub fn to_reference(&self, x: f64) -> f64 {
        (2.0 * x - self.a - self.b) / (self.b - self.a)
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let t = self.to_reference(x);
        let (mut b1, mut b2) = (0.0, 0.0);
        for c in self.coeffs[1..].iter().rev() {
            let b0 = c + 2.0 * t * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] + t * b1 - b2
    }

    /// Direct summation `Σ c_i T_i(t)` with the recurrence values.
    pub fn eval_direct(&self, x: f64) -> f64 {
        let t = self.to_reference(x);
        cheb_t_all(self.coeffs.len() - 1, t)
            .iter()
            .zip(&self.coeffs)
            .map(|(ti, c)| ti * c)
            .sum()
    }

    /// Coefficient bound `Σ |c_i|`, which dominates `|p|` on `[a, b]`.
    pub fn abs_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// `p(A)x` by the vector Clenshaw recurrence.
    pub fn apply<Op: LinearOperator + ?Sized>(&self, a: &Op, x: &[f64]) -> Result<Vec<f64>> {
        let n = x.len();
        if n != a.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: n,
            });
        }
        let scale = 2.0 / (self.b - self.a);
        let shift = (self.a + self.b) / (self.b - self.a);
        let reference = |v: &[f64]| -> Result<Vec<f64>> {
            let av = a.apply(v)?;
            Ok(av.iter().zip(v).map(|(p, q)| scale * p - shift * q).collect())
        };
        let mut b1 = vec![0.0; n];
        let mut b2 = vec![0.0; n];
        for c in self.coeffs[1..].iter().rev() {
            let tb1 = reference(&b1)?;
            let b0: Vec<f64> = (0..n).map(|i| c * x[i] + 2.0 * tb1[i] - b2[i]).collect();
            b2 = std::mem::replace(&mut b1, b0);
        }
        let tb1 = reference(&b1)?;
        Ok((0..n).map(|i| self.coeffs[0] * x[i] + tb1[i] - b2[i]).collect())
    }
}

/// Interpolates `f` at the `degree + 1` first-kind Chebyshev nodes of `[a, b]`.
pub fn cheb_interpolate(f: &ScalarFunction, interval: (f64, f64), degree: usize) -> Result<ChebyshevExpansion> {
    let (a, b) = interval;
    if !(a < b) {
        return Err(Error::Domain(format!("interval [{a}, {b}] must have a < b")));
    }
    let n = degree + 1;
    let pi = std::f64::consts::PI;
    let thetas: Vec<f64> = (0..n).map(|j| pi * (j as f64 + 0.5) / n as f64).collect();
    let values: Vec<f64> = thetas
        .iter()
        .map(|th| f.eval_checked(0.5 * (a + b) + 0.5 * (b - a) * th.cos()))
        .collect::<Result<_>>()?;
    let coeffs = (0..n)
        .map(|i| {
            let s: f64 = values
                .iter()
                .zip(&thetas)
                .map(|(v, th)| v * (i as f64 * th).cos())
                .sum();
            let c = 2.0 * s / n as f64;
            if i == 0 {
                0.5 * c
            } else {
                c
            }
        })
        .collect();
    ChebyshevExpansion::new(interval, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_kind_values() {
        assert_eq!(cheb_t(0, 0.7), 1.0);
        assert_eq!(cheb_t(1, 0.7), 0.7);
        assert_eq!(cheb_t(2, 0.5), -0.5);
        let x = 2.0f64;
        assert_eq!(cheb_t(3, x), 4.0 * x.powi(3) - 3.0 * x);
    }

    #[test]
    fn second_kind_values() {
        assert!((cheb_u(1, 0.3) - 0.6).abs() < 1e-16);
        assert_eq!(cheb_u(3, 1.0), 4.0);
        assert_eq!(cheb_u(2, 0.0), -1.0);
        assert_eq!(cheb_u(-1, 0.4), 0.0);
    }

    #[test]
    fn interpolation_recovers_polynomials() {
        let id = cheb_interpolate(&ScalarFunction::identity(), (-1.0, 1.0), 1).unwrap();
        assert!(id.coeffs()[0].abs() < 1e-15 && (id.coeffs()[1] - 1.0).abs() < 1e-15);
        let t2 = ScalarFunction::from_fn("t2", |x| 2.0 * x * x - 1.0);
        let e = cheb_interpolate(&t2, (-1.0, 1.0), 2).unwrap();
        let want = [0.0, 0.0, 1.0];
        for (c, w) in e.coeffs().iter().zip(want) {
            assert!((c - w).abs() < 1e-12);
        }
        assert_eq!(e.degree(), 2);
    }

    #[test]
    fn abs_coefficients_bounded() {
        let abs = ScalarFunction::from_fn("abs", f64::abs);
        let e = cheb_interpolate(&abs, (-1.0, 1.0), 40).unwrap();
        assert!(e.coeffs().iter().all(|c| c.abs() <= 2.0));
    }

    #[test]
    fn lobatto_includes_endpoints() {
        let p = lobatto_points(2.0, 3.0, 5);
        assert_eq!(p[0], 2.0);
        assert_eq!(p[4], 3.0);
        assert!((p[2] - 2.5).abs() < 1e-15);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn vector_clenshaw_matches_scalar_on_diagonal() {
        let e = ChebyshevExpansion::new((0.0, 4.0), vec![0.5, -1.0, 0.25, 0.75]).unwrap();
        let a = crate::SymmetricOperator::diagonal(vec![0.5, 1.0, 3.5]).unwrap();
        let y = e.apply(&a, &[1.0, 2.0, -1.0]).unwrap();
        let want = [e.eval(0.5), 2.0 * e.eval(1.0), -e.eval(3.5)];
        for (u, v) in y.iter().zip(want) {
            assert!((u - v).abs() < 1e-13);
        }
    }
}
