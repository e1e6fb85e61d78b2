//! Lanczos-based approximation of matrix functions `f(A)x`, together with the
//! tooling to measure how it behaves: minimax polynomial oracles, conjugate
//! gradient, an emulated reduced-precision arithmetic, hard spectra for linear
//! systems, and applications built on top.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod applications;
pub mod arith;
pub mod cg;
pub mod error;
pub mod function;
pub mod lanczos;
pub mod linalg;
pub mod lowerbound;
pub mod par;
pub mod polyapprox;
pub mod precision;
pub mod random;
pub mod tridiag;

pub use error::{Error, Result};
pub use function::ScalarFunction;
pub use lanczos::{apply_function, lanczos_decompose, LanczosDecomposition};
pub use linalg::{DenseMatrix, LinearOperator, SymmetricOperator};
pub use par::Execution;
pub use tridiag::{eig_tridiagonal, TridiagonalMatrix};
