//! Low-rank ADI iteration for standard and generalized Lyapunov equations.

pub mod engine;
pub mod problem;
pub mod state;
pub mod structure;

pub use engine::{
    adi_double_step, adi_real_step, lr_adi_solve, run_multistep_group, Solution, SolveFailure, SolveReport,
    TerminationStatus,
};
pub use problem::{LyapunovProblem, Pencil, DEFAULT_MAX_ITERATIONS, DEFAULT_TOL};
pub use state::{scaled_residual, AdiState, ShiftRecord};
pub use structure::{build_sg, real_structure, residual_coupling};
