//! Ritz data from the most recent block columns of the low-rank factor and
//! the adaptive strategies built on it.
//!
//! For a window `Z_h = Q R` of the last `h` logical steps the relation
//! `A Z = W Gᵀ − M Z X` restricts to the window, so
//!
//! ```text
//! N⁻¹ Qᵀ A Q = (W̃ G_hᵀ − R X_hh) R⁻¹,   N = Qᵀ M Q,  W̃ = N⁻¹ Qᵀ W,
//! ```
//!
//! needs no product with `A`. When `R` is ill conditioned the restriction
//! is formed explicitly instead.

use log::{debug, warn};
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::hamiltonian::hamiltonian_residual_shift;
use super::hull::{convex_hull_shift, HullObjective, DEFAULT_HULL_POINTS};
use super::penzl::penzl_select;
use super::precomputed::conjugate_closed;
use super::{ShiftContext, ShiftGroup, ShiftStrategy};
use crate::error::{Error, Result};
use crate::linalg::dense::{singular_extremes, thin_qr};
use crate::linalg::{block_orth, dense_schur, stabilize_triangular, to_complex, CMatrix, SchurDecomposition};
use crate::lradi::{real_structure, residual_coupling, AdiState, Pencil};
use crate::resmin::seed::KrylovSeed;

/// Condition number of the window's triangular factor beyond which the
/// restriction is computed explicitly.
pub const COND_LIMIT: f64 = 1e8;
const WINDOW_DROP_TOL: f64 = 1e-12;

/// Galerkin data on an orthonormal basis `Q`.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub q: DMatrix<f64>,
    /// Projected operator (`Qᵀ M⁻¹A Q` or `N⁻¹QᵀAQ` in the generalized case).
    pub h: DMatrix<f64>,
    /// Compressed residual factor.
    pub w_tilde: DMatrix<f64>,
    /// Triangular factor of `M Q` weighting compressed residuals.
    pub mass_weight: Option<DMatrix<f64>>,
    /// True when `h` was formed with explicit products.
    pub explicit: bool,
}

impl Restriction {
    pub fn dim(&self) -> usize {
        self.h.nrows()
    }
}

/// Schur-stabilized restriction.
#[derive(Debug, Clone)]
pub struct RitzData {
    pub restriction: Restriction,
    /// `H = U T U*` with unstable diagonal entries of `T` reflected.
    pub schur: SchurDecomposition,
    /// `U* W̃`.
    pub w_rot: CMatrix,
    /// `R_M U` for generalized problems.
    pub weight_rot: Option<CMatrix>,
    /// Number of reflected Ritz values.
    pub reflected: usize,
}

impl RitzData {
    pub fn from_restriction(restriction: Restriction) -> Result<Self> {
        let mut schur = dense_schur(&to_complex(&restriction.h))?;
        let reflected = stabilize_triangular(&mut schur.t);
        if reflected > 0 {
            debug!("reflected {reflected} unstable Ritz values");
        }
        let w_rot = schur.q.adjoint() * to_complex(&restriction.w_tilde);
        let weight_rot = restriction.mass_weight.as_ref().map(|r| to_complex(r) * &schur.q);
        Ok(Self { restriction, schur, w_rot, weight_rot, reflected })
    }

    /// Stabilized Ritz values.
    pub fn ritz_values(&self) -> Vec<Complex64> {
        self.schur.eigenvalues()
    }
}

/// Restriction onto the span of the last `h` logical steps of `Z`.
pub fn window_restriction(state: &AdiState, pencil: &Pencil<'_>, h: usize) -> Result<Restriction> {
    let j = state.iteration();
    if j == 0 {
        return Err(Error::Contract("Ritz data needs at least one completed step".into()));
    }
    if h == 0 {
        return Err(Error::Config("window size h must be at least 1".into()));
    }
    let s = state.s();
    let start = state.window_start(h);
    let zh = state.z_columns(start * s, (j - start) * s).into_owned();
    let orth = block_orth(None, &zh, WINDOW_DROP_TOL);
    let q = orth.basis;
    let k = zh.ncols();

    let generalized = pencil.is_generalized();
    let qtw = q.transpose() * &state.w;
    let (n_mat, mass_weight) = if generalized {
        let mq = pencil.apply_m(&q);
        let (_, rm) = thin_qr(&mq);
        (Some(q.transpose() * mq), Some(rm))
    } else {
        (None, None)
    };
    let n_solve = |x: &DMatrix<f64>| -> Result<DMatrix<f64>> {
        match &n_mat {
            Some(nm) => nm
                .clone()
                .lu()
                .solve(x)
                .ok_or_else(|| Error::Contract("projected mass matrix is singular".into())),
            None => Ok(x.clone()),
        }
    };
    let w_tilde = n_solve(&qtw)?;

    let mut explicit = orth.kept.len() < k;
    let mut hmat = None;
    if !explicit {
        let r = orth.coeffs;
        let (smin, smax) = singular_extremes(&r);
        if smin == 0.0 || smax / smin > COND_LIMIT {
            explicit = true;
        } else {
            let (sr, gr) = real_structure(&state.shifts[start..j], s);
            let x = residual_coupling(&sr, &gr);
            let lhs = &w_tilde * gr.transpose() - &r * x;
            // H R = lhs  ⇔  Rᵀ Hᵀ = lhsᵀ.
            let ht = r
                .transpose()
                .solve_lower_triangular(&lhs.transpose())
                .ok_or_else(|| Error::Contract("window factor is singular".into()))?;
            hmat = Some(ht.transpose());
        }
    }
    let h_final = match hmat {
        Some(hm) => hm,
        None => {
            warn!("window of {k} columns is ill conditioned; forming the restriction explicitly");
            n_solve(&(q.transpose() * pencil.apply_a(&q)))?
        }
    };
    Ok(Restriction { q, h: h_final, w_tilde, mass_weight, explicit })
}

/// Window restriction followed by Schur stabilization.
pub fn ritz_update(state: &AdiState, pencil: &Pencil<'_>, h: usize) -> Result<RitzData> {
    RitzData::from_restriction(window_restriction(state, pencil, h)?)
}

/// Which rule turns Ritz data into shifts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RitzSelection {
    /// Penzl selection over all current Ritz values.
    Heuristic,
    ConvexHull { objective: HullObjective, points: usize },
    Hamiltonian,
}

impl RitzSelection {
    pub fn convex_hull() -> Self {
        RitzSelection::ConvexHull { objective: HullObjective::default(), points: DEFAULT_HULL_POINTS }
    }
}

/// Adaptive shifts from the last `h` steps of `Z`. Before the first step
/// the Ritz data of an extended Krylov seed is used.
pub struct RitzStrategy {
    pub h: usize,
    pub selection: RitzSelection,
    pub seed_orders: (usize, usize),
}

impl RitzStrategy {
    pub fn new(h: usize, selection: RitzSelection) -> Self {
        Self { h, selection, seed_orders: (2, 2) }
    }

    fn data(&self, ctx: &ShiftContext<'_, '_>) -> Result<RitzData> {
        if ctx.state.iteration() == 0 {
            let (p, m) = self.seed_orders;
            let seed = KrylovSeed::build(ctx.pencil, p, m, None)?;
            RitzData::from_restriction(seed.restriction(ctx.pencil))
        } else {
            ritz_update(ctx.state, ctx.pencil, self.h)
        }
    }
}

impl ShiftStrategy for RitzStrategy {
    fn name(&self) -> String {
        let kind = match self.selection {
            RitzSelection::Heuristic => "heur",
            RitzSelection::ConvexHull { .. } => "conv",
            RitzSelection::Hamiltonian => "Hres",
        };
        format!("Z({})+{}", self.h, kind)
    }

    fn next_shifts(&mut self, ctx: &ShiftContext<'_, '_>) -> Result<Vec<ShiftGroup>> {
        let data = self.data(ctx)?;
        let shifts = match self.selection {
            RitzSelection::Heuristic => {
                let ritz = conjugate_closed(&data.ritz_values(), 1e-10);
                penzl_select(&ritz, ritz.len())?
            }
            RitzSelection::ConvexHull { objective, points } => {
                let used: Vec<Complex64> = ctx.state.shifts.iter().map(|r| r.alpha).collect();
                vec![convex_hull_shift(&data.ritz_values(), &used, points, objective)]
            }
            RitzSelection::Hamiltonian => vec![hamiltonian_residual_shift(&data.schur.t, &data.w_rot)],
        };
        Ok(shifts.into_iter().map(ShiftGroup::single).collect())
    }
}
