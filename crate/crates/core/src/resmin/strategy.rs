//! Residual-minimizing shift strategy.
//!
//! Every call compresses the current residual onto a small subspace,
//! stabilizes the restriction, takes the residual-Hamiltonian shift of the
//! same data as initial guess and minimizes the compressed objective. Any
//! failure falls back to that initial guess.

use log::{debug, warn};
use num_complex::Complex64;

use super::compress::{compress_zh, recycle_krylov};
use super::objective::CompressedObjective;
use super::optimize::{optimize_shift, Method, OptimizeOptions, OptimizeResult, TangentialPolicy};
use super::seed::KrylovSeed;
use crate::error::{Error, Result};
use crate::lradi::{AdiState, Pencil};
use crate::shifts::hamiltonian::hamiltonian_residual_shift;
use crate::shifts::ritz::RitzData;
use crate::shifts::{ShiftContext, ShiftGroup, ShiftStrategy};

/// Projection subspace for the objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subspace {
    /// Last `h` steps of the low-rank factor.
    Window(usize),
    /// Seed `EK_{p,m}(A, B)` recycled with the factor.
    ExtendedKrylov { p: usize, m: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResminConfig {
    pub subspace: Subspace,
    pub method: Method,
    pub tangential: TangentialPolicy,
    pub multi_start: bool,
    /// Applications of each optimized shift; a complex shift brings its
    /// conjugate along, so it covers `2g` logical steps.
    pub g: usize,
    /// Seed orders for the first step of [`Subspace::Window`].
    pub window_seed: (usize, usize),
    /// Optional real pole for the inverse seed direction.
    pub phi: Option<f64>,
}

impl ResminConfig {
    pub fn new(subspace: Subspace, method: Method) -> Self {
        Self {
            subspace,
            method,
            tangential: TangentialPolicy::Auto,
            multi_start: true,
            g: 1,
            window_seed: (2, 2),
            phi: None,
        }
    }

    pub fn with_g(mut self, g: usize) -> Self {
        self.g = g;
        self
    }
}

/// Outcome of one shift computation.
#[derive(Debug, Clone)]
pub struct ResminStep {
    pub shift: Complex64,
    pub initial: Complex64,
    pub optimized: Option<OptimizeResult>,
    pub fell_back: bool,
}

pub struct ResminStrategy {
    pub config: ResminConfig,
    seed: Option<KrylovSeed>,
    pub history: Vec<ResminStep>,
}

impl ResminStrategy {
    pub fn new(config: ResminConfig) -> Self {
        Self { config, seed: None, history: Vec::new() }
    }

    fn seed(&mut self, pencil: &Pencil<'_>) -> Result<&KrylovSeed> {
        if self.seed.is_none() {
            let (p, m) = match self.config.subspace {
                Subspace::Window(_) => self.config.window_seed,
                Subspace::ExtendedKrylov { p, m } => (p, m),
            };
            self.seed = Some(KrylovSeed::build(pencil, p, m, self.config.phi)?);
        }
        Ok(self.seed.as_ref().unwrap())
    }

    fn ritz_data(&mut self, pencil: &Pencil<'_>, state: &AdiState) -> Result<RitzData> {
        let restriction = if state.iteration() == 0 {
            self.seed(pencil)?.restriction(pencil)
        } else {
            match self.config.subspace {
                Subspace::Window(h) => compress_zh(state, pencil, h)?,
                Subspace::ExtendedKrylov { p, m } => {
                    let seed = self.seed(pencil)?.clone();
                    recycle_krylov(&seed, state, pencil, p, m)?
                }
            }
        };
        RitzData::from_restriction(restriction)
    }

    /// One optimized shift with its diagnostics.
    pub fn compute(&mut self, pencil: &Pencil<'_>, state: &AdiState) -> Result<ResminStep> {
        let data = self.ritz_data(pencil, state)?;
        let initial = hamiltonian_residual_shift(&data.schur.t, &data.w_rot);
        let options = OptimizeOptions {
            method: self.config.method,
            tangential: self.config.tangential,
            multi_start: self.config.multi_start,
        };
        let step = match CompressedObjective::from_ritz(&data, self.config.g) {
            Ok(co) => {
                let res = optimize_shift(&co, initial, &options);
                if res.degraded || !res.value.is_finite() {
                    warn!("shift optimization degraded; using the residual-Hamiltonian shift {initial}");
                    ResminStep { shift: initial, initial, optimized: Some(res), fell_back: true }
                } else {
                    debug!("optimized shift {} (psi {:.3e}) from {initial}", res.alpha, res.value);
                    ResminStep { shift: res.alpha, initial, optimized: Some(res), fell_back: false }
                }
            }
            Err(e) => {
                warn!("compressed objective unavailable ({e}); using the residual-Hamiltonian shift {initial}");
                ResminStep { shift: initial, initial, optimized: None, fell_back: true }
            }
        };
        Ok(step)
    }
}

impl ShiftStrategy for ResminStrategy {
    fn name(&self) -> String {
        let sub = match self.config.subspace {
            Subspace::Window(h) => format!("Z({h})"),
            Subspace::ExtendedKrylov { p, m } => format!("EK({p},{m})"),
        };
        let method = match self.config.method {
            Method::GaussNewton => "gn",
            Method::NewtonTrust => "tr",
        };
        let mut name = format!("resmin+{sub}+{method}");
        if self.config.g > 1 {
            name.push_str(&format!(", g={}", self.config.g));
        }
        name
    }

    fn next_shifts(&mut self, ctx: &ShiftContext<'_, '_>) -> Result<Vec<ShiftGroup>> {
        if self.config.g == 0 {
            return Err(Error::Config("multistep power g must be at least 1".into()));
        }
        let step = self.compute(ctx.pencil, ctx.state)?;
        let alpha = step.shift;
        self.history.push(step);
        Ok(vec![ShiftGroup { alpha, steps: self.config.g }])
    }
}
