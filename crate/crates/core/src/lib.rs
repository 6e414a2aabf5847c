//! Low-rank ADI iteration for large sparse Lyapunov equations
//!
//! ```text
//! A X + X A^T + B B^T = 0            (standard)
//! A X M^T + M X A^T + B B^T = 0      (generalized, invertible M)
//! ```
//!
//! The solution is approximated by a real low-rank factor `X ≈ Z Z^T`. The
//! convergence speed of the iteration is governed by the shift parameters;
//! this crate provides precomputed and adaptive Ritz-value strategies and,
//! as its main feature, shifts that minimize a compressed approximation of
//! the next Lyapunov residual norm.
//!
//! Module map:
//!
//! - [`linalg`]: sparse storage, shifted sparse LU, small dense kernels,
//!   block orthogonalization and Matrix Market I/O.
//! - [`lradi`]: the iteration itself (real steps, real double steps for
//!   complex conjugate pairs, multistep groups sharing one factorization).
//! - [`shifts`]: the strategy interface plus Penzl, convex-hull and
//!   residual-Hamiltonian selections.
//! - [`resmin`]: residual-minimizing shifts (subspaces, compressed
//!   objectives with analytic derivatives, box-constrained optimizers).
//! - [`problems`]: reproducible convection-diffusion test matrices and
//!   random right-hand sides.

pub mod error;
pub mod linalg;
pub mod lradi;
pub mod problems;
pub mod resmin;
pub mod shifts;

pub use error::{Error, Result};
pub use num_complex::Complex64;
