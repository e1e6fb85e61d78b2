//! Chebyshev expansions and minimax approximation on unions of intervals.

pub mod chebyshev;
pub mod domain;
pub mod minimax;

pub use chebyshev::{cheb_interpolate, cheb_t, cheb_u, ChebyshevExpansion};
pub use domain::IntervalUnion;
pub use minimax::{min_degree_for, minimax, minimax_adaptive, MinimaxResult};
