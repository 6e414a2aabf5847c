//! Residual-minimizing shifts: the next shift minimizes a compressed
//! approximation of the residual norm after applying it.

pub mod bounds;
pub mod compress;
pub mod objective;
pub mod optimize;
pub mod seed;
pub mod strategy;

pub use bounds::{derive_bounds, Bounds};
pub use compress::{compress_zh, recycle_krylov};
pub use objective::{
    eval_gradient, eval_hessian, eval_objective, nls_residual_jacobian, CompressedObjective, DerivativeWorkspace,
};
pub use optimize::{optimize_shift, Method, OptimizeOptions, OptimizeResult, TangentialPolicy};
pub use seed::KrylovSeed;
pub use strategy::{ResminConfig, ResminStep, ResminStrategy, Subspace};
