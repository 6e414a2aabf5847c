//! Linear-algebra kernels shared by the solver and the shift strategies.

pub mod dense;
pub mod factor;
pub mod mmio;
pub mod orth;
pub mod sparse;

pub use dense::{
    dense_eig_hermitian, dense_schur, spectral_norm_sq, stabilize_triangular, to_complex, CMatrix,
    SchurDecomposition,
};
pub use factor::{sparse_shifted_factorize, ShiftedFactorization, ShiftedFactorizer};
pub use mmio::{matrix_market_read, matrix_market_write};
pub use orth::{block_orth, Orthogonalized, DEFAULT_DROP_TOL};
pub use sparse::SparseMatrix;
