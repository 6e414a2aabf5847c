//! Shift strategies and the interface the solver consumes them through.
//!
//! A strategy is asked for shifts whenever the solver has used up the
//! previously returned ones. It answers with a list of groups; each group
//! is one shift applied a number of times with a single factorization.

pub mod hamiltonian;
pub mod hull;
pub mod penzl;
pub mod precomputed;
pub mod ritz;

use num_complex::Complex64;

use crate::error::Result;
use crate::lradi::{AdiState, Pencil};

pub use hamiltonian::hamiltonian_residual_shift;
pub use hull::{convex_hull_shift, HullObjective};
pub use penzl::penzl_select;
pub use precomputed::{precomputed_heuristic, PrecomputedShifts};
pub use ritz::{ritz_update, RitzData, RitzSelection, RitzStrategy};

/// One shift applied `steps` times in a row: `steps` real steps, or
/// `steps` double steps (`2·steps` logical steps) for a complex shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftGroup {
    pub alpha: Complex64,
    pub steps: usize,
}

impl ShiftGroup {
    pub fn single(alpha: Complex64) -> Self {
        Self { alpha, steps: 1 }
    }
}

/// Read-only view of the solve handed to strategies.
pub struct ShiftContext<'a, 'p> {
    pub pencil: &'a Pencil<'p>,
    pub state: &'a AdiState,
}

pub trait ShiftStrategy {
    fn name(&self) -> String;

    fn next_shifts(&mut self, ctx: &ShiftContext<'_, '_>) -> Result<Vec<ShiftGroup>>;
}

/// A fixed list of shifts, used cyclically.
#[derive(Debug, Clone)]
pub struct FixedShifts {
    pub shifts: Vec<Complex64>,
}

impl FixedShifts {
    pub fn new(shifts: Vec<Complex64>) -> Self {
        Self { shifts }
    }
}

impl ShiftStrategy for FixedShifts {
    fn name(&self) -> String {
        "fixed".into()
    }

    fn next_shifts(&mut self, _ctx: &ShiftContext<'_, '_>) -> Result<Vec<ShiftGroup>> {
        Ok(self.shifts.iter().map(|&a| ShiftGroup::single(a)).collect())
    }
}

/// Puts the conjugate with `Im ≥ 0` first.
pub(crate) fn upper_half(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        z.conj()
    } else {
        z
    }
}
