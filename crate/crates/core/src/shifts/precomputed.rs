//! Penzl shifts from Ritz values of an extended Krylov space, computed
//! once and used cyclically.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::penzl::penzl_select;
use super::ritz::RitzData;
use super::{ShiftContext, ShiftGroup, ShiftStrategy};
use crate::error::Result;
use crate::lradi::Pencil;
use crate::resmin::seed::KrylovSeed;

/// Removes the numerical asymmetry of eigenvalues of a real matrix: entries
/// with tiny imaginary part become real, and each complex pair is
/// represented by one exact conjugate pair.
pub fn conjugate_closed(values: &[Complex64], rel_tol: f64) -> Vec<Complex64> {
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut out = Vec::with_capacity(values.len());
    for &z in values {
        if z.im.abs() <= rel_tol * scale {
            out.push(Complex64::new(z.re, 0.0));
        } else if z.im > 0.0 {
            out.push(z);
            out.push(z.conj());
        }
    }
    out
}

/// `count` shifts by Penzl selection over the Ritz values of
/// `EK_{p,m}(A, B·1)` (with `A, B` replaced by `M⁻¹A, M⁻¹B` when a mass
/// matrix is present).
pub fn precomputed_heuristic(pencil: &Pencil<'_>, count: usize, p: usize, m: usize) -> Result<Vec<Complex64>> {
    let b = &pencil.problem().b;
    let ones = DMatrix::from_element(b.ncols(), 1, 1.0);
    let seed = KrylovSeed::build_for(pencil, &(b * ones), p, m, None)?;
    let ritz = RitzData::from_restriction(seed.restriction(pencil))?;
    let cands = conjugate_closed(&ritz.ritz_values(), 1e-10);
    penzl_select(&cands, count)
}

/// Table-style `heur(J, p, m)` strategy.
pub struct PrecomputedShifts {
    pub count: usize,
    pub p: usize,
    pub m: usize,
    shifts: Option<Vec<Complex64>>,
}

impl PrecomputedShifts {
    pub fn new(count: usize, p: usize, m: usize) -> Self {
        Self { count, p, m, shifts: None }
    }

    pub fn shifts(&self) -> Option<&[Complex64]> {
        self.shifts.as_deref()
    }
}

impl ShiftStrategy for PrecomputedShifts {
    fn name(&self) -> String {
        format!("heur({},{},{})", self.count, self.p, self.m)
    }

    fn next_shifts(&mut self, ctx: &ShiftContext<'_, '_>) -> Result<Vec<ShiftGroup>> {
        if self.shifts.is_none() {
            self.shifts = Some(precomputed_heuristic(ctx.pencil, self.count, self.p, self.m)?);
        }
        Ok(self.shifts.as_ref().unwrap().iter().map(|&a| ShiftGroup::single(a)).collect())
    }
}
