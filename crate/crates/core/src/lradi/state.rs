//! Iteration state: the growing low-rank factor, the residual factor and
//! the shift history.

use nalgebra::{DMatrix, DMatrixView};
use num_complex::Complex64;

use super::problem::Pencil;
use crate::linalg::spectral_norm_sq;

/// One logical ADI step. Complex shifts always appear as `(α, ᾱ)` pairs in
/// consecutive records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftRecord {
    pub alpha: Complex64,
    pub gamma: f64,
}

impl ShiftRecord {
    pub fn new(alpha: Complex64) -> Self {
        Self { alpha, gamma: (-2.0 * alpha.re).sqrt() }
    }

    pub fn is_complex(&self) -> bool {
        self.alpha.im != 0.0
    }
}

/// Real low-rank factor `Z` (stored column-major, grown in place), residual
/// factor `W = B + M Z G` and bookkeeping after `j` logical steps.
#[derive(Debug, Clone)]
pub struct AdiState {
    n: usize,
    s: usize,
    z: Vec<f64>,
    pub w: DMatrix<f64>,
    /// `M⁻¹ W`, maintained incrementally for generalized problems.
    pub w_m: Option<DMatrix<f64>>,
    pub shifts: Vec<ShiftRecord>,
    /// Scaled residual `‖W*W‖ / ‖B*B‖` before the first and after every
    /// logical step; for the first half of a double step the value of the
    /// intermediate complex residual is recorded.
    pub residuals: Vec<f64>,
    b_norm_sq: f64,
}

impl AdiState {
    pub fn new(pencil: &Pencil<'_>) -> Self {
        let b = &pencil.problem().b;
        let w_m = pencil.is_generalized().then(|| pencil.solve_m(b));
        Self {
            n: b.nrows(),
            s: b.ncols(),
            z: Vec::new(),
            w: b.clone(),
            w_m,
            shifts: Vec::new(),
            residuals: vec![1.0],
            b_norm_sq: spectral_norm_sq(b),
        }
    }

    /// Number of completed logical steps `j`.
    pub fn iteration(&self) -> usize {
        self.shifts.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn b_norm_sq(&self) -> f64 {
        self.b_norm_sq
    }

    pub fn z_cols(&self) -> usize {
        self.z.len().checked_div(self.n).unwrap_or(0)
    }

    pub fn z(&self) -> DMatrixView<'_, f64> {
        DMatrixView::from_slice(&self.z, self.n, self.z_cols())
    }

    /// Columns `start..start+count` of `Z`.
    pub fn z_columns(&self, start: usize, count: usize) -> DMatrixView<'_, f64> {
        DMatrixView::from_slice(&self.z[start * self.n..(start + count) * self.n], self.n, count)
    }

    /// `M⁻¹ W` (equal to `W` in the standard case).
    pub fn w_mass(&self) -> &DMatrix<f64> {
        self.w_m.as_ref().unwrap_or(&self.w)
    }

    pub fn last_residual(&self) -> f64 {
        *self.residuals.last().unwrap()
    }

    pub(crate) fn push_columns(&mut self, cols: &DMatrix<f64>) {
        debug_assert_eq!(cols.nrows(), self.n);
        self.z.extend_from_slice(cols.as_slice());
    }

    pub(crate) fn scaled(&self, w_norm_sq: f64) -> f64 {
        if self.b_norm_sq == 0.0 {
            0.0
        } else {
            w_norm_sq / self.b_norm_sq
        }
    }

    /// Start index of the `k` most recent logical steps, extended so that
    /// no conjugate pair is split.
    pub fn window_start(&self, k: usize) -> usize {
        let j = self.iteration();
        let mut start = j.saturating_sub(k);
        if start > 0 && start < j && self.pair_second(start) {
            start -= 1;
        }
        start
    }

    /// True when step `i` is the second half of a conjugate pair.
    pub fn pair_second(&self, i: usize) -> bool {
        let mut k = 0;
        while k < i {
            k += if self.shifts[k].is_complex() { 2 } else { 1 };
        }
        k > i
    }
}

/// `‖W*W‖₂ / ‖B*B‖₂` for the maintained residual factor.
pub fn scaled_residual(state: &AdiState) -> f64 {
    state.scaled(spectral_norm_sq(&state.w))
}
