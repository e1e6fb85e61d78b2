//! Matrix-function applications built on Lanczos and CG: a soft step
//! function, matrix exponentials, top singular values, and accelerated
//! polynomials.

pub mod accel;
pub mod exp;
pub mod shifted;
pub mod step;
pub mod topsv;

pub use accel::{accelerated_poly_apply, AccelPolySpec, AccelTerm};
pub use exp::{matrix_exp_apply, matrix_exp_psd_apply};
pub use shifted::{AffineOperator, ShiftedInverse, StepTransform};
pub use step::{soft_step_apply, soft_step_scalar, StepParams};
pub use topsv::{top_singular_value, TopSingularValue};

/// Constants in front of the asymptotic iteration counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationConstants {
    /// Soft step degree `q = ⌈c·γ⁻²·ln(1/ε)⌉`.
    pub step_q: f64,
    /// Soft step iterations `k = ⌈c·γ⁻¹·ln(1/(εγ))⌉`.
    pub step_k: f64,
    /// Exponential iterations `k = ⌈c₁‖A‖ + c₂·ln(1/ε)⌉`.
    pub exp_norm: f64,
    pub exp_log: f64,
    /// Positive semidefinite exponential `k = ⌈c·ln(1/ε)⌉`.
    pub exp_psd: f64,
    /// Singular value iterations `k = ⌈c·√(1/Δ)·ln(n/Δ)⌉`.
    pub topsv: f64,
    /// Accelerated polynomial iterations `q = ⌈c·√(d·ln(d·A/ε))⌉`.
    pub accel: f64,
}

impl Default for IterationConstants {
    fn default() -> Self {
        Self {
            step_q: 4.0,
            step_k: 4.0,
            exp_norm: 4.0,
            exp_log: 4.0,
            exp_psd: 4.0,
            topsv: 4.0,
            accel: 1.5,
        }
    }
}

pub(crate) fn ceil_count(v: f64) -> usize {
    (v.ceil() as usize).max(1)
}
