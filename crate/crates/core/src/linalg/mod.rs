//! Dense and sparse symmetric linear algebra, Matrix Market ingestion and the
//! exact matrix-function oracle.

pub mod dense;
pub mod mtx;
pub mod operator;
pub mod oracle;

pub use dense::{symmetric_eigen, DenseMatrix, EigenDecomposition};
pub use mtx::{load_matrix_market, parse_matrix_market};
pub use operator::{LinearOperator, Storage, SymmetricOperator};
pub use oracle::{exact_matrix_function, spectral_range, ExactOracle, ORACLE_CAP};
