//! Scalar arithmetic abstraction shared by the double-precision code paths and
//! the reduced-precision emulation.
//!
//! Every kernel that participates in a stability experiment (dot products,
//! norms, matrix-vector products, the Lanczos recurrence) is written once
//! against [`Arithmetic`]. With [`Native`] each operation is a plain `f64`
//! operation; with [`crate::precision::Emulated`] every result is rounded to a
//! narrower significand. Both paths therefore perform the same operations in
//! the same order, which is what makes a 52-bit emulated run bit-identical to
//! a native one.

/// Rounded scalar operations. Accumulations run left to right.
pub trait Arithmetic: Sync {
    /// Rounds an exactly computed `f64` result to this arithmetic's precision.
    fn round(&self, x: f64) -> f64;

    /// Relative precision `ε_mach` of one rounded operation.
    fn epsilon(&self) -> f64;

    #[inline]
    fn add(&self, a: f64, b: f64) -> f64 {
        self.round(a + b)
    }

    #[inline]
    fn sub(&self, a: f64, b: f64) -> f64 {
        self.round(a - b)
    }

    #[inline]
    fn mul(&self, a: f64, b: f64) -> f64 {
        self.round(a * b)
    }

    #[inline]
    fn div(&self, a: f64, b: f64) -> f64 {
        self.round(a / b)
    }

    #[inline]
    fn sqrt(&self, a: f64) -> f64 {
        self.round(a.sqrt())
    }

    fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        let mut acc = 0.0;
        for (x, y) in a.iter().zip(b) {
            acc = self.add(acc, self.mul(*x, *y));
        }
        acc
    }

    fn norm(&self, a: &[f64]) -> f64 {
        self.sqrt(self.dot(a, a))
    }

    /// `y ← y − s·x`, entrywise.
    fn axpy_neg(&self, s: f64, x: &[f64], y: &mut [f64]) {
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = self.sub(*yi, self.mul(s, *xi));
        }
    }

    /// `x ← x / s`, entrywise.
    fn scale_div(&self, x: &mut [f64], s: f64) {
        for xi in x.iter_mut() {
            *xi = self.div(*xi, s);
        }
    }
}

/// IEEE double precision, no extra rounding.
#[derive(Debug, Clone, Copy, Default)]
pub struct Native;

impl Arithmetic for Native {
    #[inline(always)]
    fn round(&self, x: f64) -> f64 {
        x
    }

    fn epsilon(&self) -> f64 {
        f64::EPSILON
    }
}

/// Native dot product, left to right.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    Native.dot(a, b)
}

/// Native Euclidean norm.
pub fn norm2(a: &[f64]) -> f64 {
    Native.norm(a)
}

/// `a − b`, entrywise.
pub fn sub_vec(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
