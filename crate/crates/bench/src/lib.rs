//! Benchmark harness for the LR-ADI shift strategies: configuration files,
//! strategy notation, runs and comparison tables.

pub mod config;
pub mod error;
pub mod run;
pub mod strategy;

pub use config::{Overrides, ProblemKind, ProblemSpec, RunConfig};
pub use error::BenchError;
pub use run::{build_problem, compare, execute, run, RunResult, Summary};
pub use strategy::{RitzKind, StrategySpec};
