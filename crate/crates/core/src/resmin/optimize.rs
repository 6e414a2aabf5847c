//! Box-constrained minimization of the compressed objective over
//! `(ν, ξ)`.
//!
//! Both methods work in unit-box coordinates and only accept points that
//! decrease their merit function, so the result is never worse than the
//! start. Several starts are tried and the best result is kept.

use log::debug;
use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen, Vector2};
use num_complex::Complex64;

use super::bounds::Bounds;
use super::objective::{
    eval_hessian, eval_objective, nls_residual_jacobian, CompressedObjective, DerivativeWorkspace,
};
use crate::error::Error;

pub const MAX_ITERATIONS: usize = 100;
pub const GRAD_TOL: f64 = 1e-8;
pub const STEP_TOL: f64 = 1e-10;
/// Points per axis of the coarse grid used to seed extra starts.
pub const START_GRID: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Levenberg-damped projected Gauss–Newton on the stacked residual.
    #[default]
    GaussNewton,
    /// Box-projected trust-region Newton on `ψ`.
    NewtonTrust,
}

/// Whether multi-column residuals are reduced to one tangential direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TangentialPolicy {
    /// Reduce for the trust-region method when `s > 1`.
    #[default]
    Auto,
    Always,
    Never,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    pub method: Method,
    pub tangential: TangentialPolicy,
    /// Extra starts from the stabilized eigenvalues and a coarse grid.
    pub multi_start: bool,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self { method: Method::GaussNewton, tangential: TangentialPolicy::Auto, multi_start: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub alpha: Complex64,
    /// `ψ` of the untransformed compressed objective at `alpha`.
    pub value: f64,
    pub iterations: usize,
    /// True when no feasible evaluation was possible and the start was
    /// returned unchanged.
    pub degraded: bool,
}

struct Problem<'a> {
    co: &'a CompressedObjective,
    bounds: Bounds,
    dims: usize,
}

impl Problem<'_> {
    fn point(&self, x: [f64; 2]) -> Complex64 {
        self.bounds.from_unit(x)
    }

    fn clamp(&self, x: [f64; 2]) -> [f64; 2] {
        [x[0].clamp(0.0, 1.0), if self.dims == 2 { x[1].clamp(0.0, 1.0) } else { 0.0 }]
    }

    fn diam(&self) -> f64 {
        (self.dims as f64).sqrt()
    }

    /// Gradient norm projected onto the feasible directions at `x`.
    fn projected_norm(&self, x: [f64; 2], g: [f64; 2]) -> f64 {
        let y = self.clamp([x[0] - g[0], x[1] - g[1]]);
        (x[0] - y[0]).hypot(x[1] - y[1])
    }

    fn scale(&self, grad: [f64; 2]) -> [f64; 2] {
        let s = self.bounds.scale();
        [grad[0] * s[0], if self.dims == 2 { grad[1] * s[1] } else { 0.0 }]
    }
}

fn gauss_newton(p: &Problem<'_>, x0: [f64; 2]) -> ([f64; 2], usize) {
    let co = p.co;
    let s = p.bounds.scale();
    let eval = |x: [f64; 2]| {
        let a = p.point(x);
        nls_residual_jacobian(co, a.re, a.im).ok().map(|(r, j)| {
            let f: f64 = r.iter().map(|v| v * v).sum();
            let mut js = DMatrix::zeros(j.nrows(), p.dims);
            for k in 0..p.dims {
                js.set_column(k, &(j.column(k) * s[k]));
            }
            (f, DVector::from_vec(r), js)
        })
    };
    let mut x = x0;
    let Some((mut f, mut r, mut j)) = eval(x) else { return (x, 0) };
    let mut lambda = 1e-3;
    let mut it = 0;
    while it < MAX_ITERATIONS {
        it += 1;
        let jtj = j.transpose() * &j;
        let grad = j.transpose() * &r * 2.0;
        let g2 = [grad[0], if p.dims == 2 { grad[1] } else { 0.0 }];
        if p.projected_norm(x, g2) <= GRAD_TOL * (1.0 + f) {
            break;
        }
        let diag_scale = (0..p.dims).map(|k| jtj[(k, k)]).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let mut accepted = false;
        while lambda < 1e12 {
            let mut m = jtj.clone();
            for k in 0..p.dims {
                m[(k, k)] += lambda * diag_scale;
            }
            let rhs = -(j.transpose() * &r);
            let Some(step) = m.cholesky().map(|c| c.solve(&rhs)) else {
                lambda *= 4.0;
                continue;
            };
            let xn = p.clamp([x[0] + step[0], x[1] + if p.dims == 2 { step[1] } else { 0.0 }]);
            let moved = (xn[0] - x[0]).hypot(xn[1] - x[1]);
            if moved <= STEP_TOL * p.diam() {
                let done = match eval(xn) {
                    Some((fnew, ..)) if fnew < f => xn,
                    _ => x,
                };
                return (done, it);
            }
            match eval(xn) {
                Some((fnew, rn, jn)) if fnew < f => {
                    x = xn;
                    f = fnew;
                    r = rn;
                    j = jn;
                    lambda = (lambda / 3.0).max(1e-12);
                    accepted = true;
                    break;
                }
                _ => lambda *= 4.0,
            }
        }
        if !accepted {
            break;
        }
    }
    (x, it)
}

/// Minimizes `gᵀp + ½pᵀHp` over `‖p‖ ≤ Δ` exactly for `dims ≤ 2`.
fn trust_region_step(g: [f64; 2], h: [[f64; 2]; 2], delta: f64, dims: usize) -> [f64; 2] {
    if dims == 1 {
        let (g0, h0) = (g[0], h[0][0]);
        if h0 > 0.0 && (g0 / h0).abs() <= delta {
            return [-g0 / h0, 0.0];
        }
        // Downhill, or either way along negative curvature at a stationary point.
        let dir = if g0 > 0.0 {
            -1.0
        } else if g0 < 0.0 || h0 < 0.0 {
            1.0
        } else {
            0.0
        };
        return [dir * delta, 0.0];
    }
    let eig = SymmetricEigen::new(Matrix2::new(h[0][0], h[0][1], h[1][0], h[1][1]));
    let gv = Vector2::new(g[0], g[1]);
    let lam = [eig.eigenvalues[0], eig.eigenvalues[1]];
    let v = [eig.eigenvectors.column(0).into_owned(), eig.eigenvectors.column(1).into_owned()];
    let c = [v[0].dot(&gv), v[1].dot(&gv)];
    let step = |mu: f64| -> Vector2<f64> { -(v[0] * (c[0] / (lam[0] + mu)) + v[1] * (c[1] / (lam[1] + mu))) };
    let lmin = lam[0].min(lam[1]);
    if lmin > 0.0 {
        let pn = step(0.0);
        if pn.norm() <= delta {
            return [pn[0], pn[1]];
        }
    }
    let mu_lo = (-lmin).max(0.0);
    let kmin = if lam[0] <= lam[1] { 0 } else { 1 };
    let gscale = gv.norm().max(f64::MIN_POSITIVE);
    if c[kmin].abs() <= 1e-14 * gscale {
        // Hard case: move along the lowest curvature direction.
        let other = 1 - kmin;
        let base = if (lam[other] + mu_lo).abs() > 0.0 { -v[other] * (c[other] / (lam[other] + mu_lo)) } else { Vector2::zeros() };
        let rem = (delta * delta - base.norm_squared()).max(0.0).sqrt();
        let p = base + v[kmin] * rem;
        return [p[0], p[1]];
    }
    // ‖p(μ)‖ decreases on (μ_lo, ∞): bracket and bisect.
    let mut lo = mu_lo;
    let mut hi = mu_lo + gscale / delta + lam[0].abs() + lam[1].abs();
    while step(hi).norm() > delta {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= mu_lo || step(mid).norm() > delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p = step(hi);
    [p[0], p[1]]
}

fn newton_trust(p: &Problem<'_>, x0: [f64; 2]) -> ([f64; 2], usize) {
    let s = p.bounds.scale();
    let mut co_local = p.co.clone();
    let eval = |co: &CompressedObjective, x: [f64; 2], ws: &mut DerivativeWorkspace| {
        let a = p.point(x);
        eval_hessian(co, a.re, a.im, ws).map(|(f, g, h)| {
            let g = p.scale(g);
            let mut hs = [[h[0][0] * s[0] * s[0], h[0][1] * s[0] * s[1]], [h[1][0] * s[0] * s[1], h[1][1] * s[1] * s[1]]];
            if p.dims == 1 {
                hs[0][1] = 0.0;
                hs[1][0] = 0.0;
                hs[1][1] = 0.0;
            }
            (f, g, hs)
        })
    };
    let mut ws = DerivativeWorkspace::new();
    let mut x = x0;
    let mut cur = match eval(&co_local, x, &mut ws) {
        Ok(v) => v,
        Err(Error::NonSmooth { .. }) if co_local.s() > 1 => {
            debug!("coalescing Gram eigenvalues; switching to a tangential direction");
            co_local = co_local.tangential_reduce();
            ws = DerivativeWorkspace::new();
            match eval(&co_local, x, &mut ws) {
                Ok(v) => v,
                Err(_) => return (x, 0),
            }
        }
        Err(_) => return (x, 0),
    };
    let mut delta = 0.25;
    let mut it = 0;
    while it < MAX_ITERATIONS {
        it += 1;
        let (f, g, h) = cur;
        if p.projected_norm(x, g) <= GRAD_TOL * (1.0 + f) {
            break;
        }
        let step = trust_region_step(g, h, delta, p.dims);
        let xn = p.clamp([x[0] + step[0], x[1] + step[1]]);
        let d = [xn[0] - x[0], xn[1] - x[1]];
        let moved = d[0].hypot(d[1]);
        if moved <= STEP_TOL * p.diam() {
            if delta <= STEP_TOL * p.diam() {
                break;
            }
            delta *= 0.25;
            continue;
        }
        let pred = -(g[0] * d[0] + g[1] * d[1])
            - 0.5 * (d[0] * (h[0][0] * d[0] + h[0][1] * d[1]) + d[1] * (h[1][0] * d[0] + h[1][1] * d[1]));
        let next = eval(&co_local, xn, &mut ws);
        let (fnew, ok) = match &next {
            Ok(v) => (v.0, true),
            Err(Error::NonSmooth { .. }) => {
                let a = p.point(xn);
                (eval_objective(&co_local, a.re, a.im), false)
            }
            Err(_) => (f64::INFINITY, false),
        };
        let rho = if pred > 0.0 { (f - fnew) / pred } else { -1.0 };
        if fnew < f && ok && rho > 0.1 {
            x = xn;
            cur = next.unwrap();
            if rho > 0.75 && moved >= 0.99 * delta {
                delta = (delta * 2.0).min(1.0);
            }
        } else if fnew < f && !ok && co_local.s() > 1 {
            // The accepted point is non-smooth for the block objective.
            co_local = co_local.tangential_reduce();
            ws = DerivativeWorkspace::new();
            match eval(&co_local, x, &mut ws) {
                Ok(v) => cur = v,
                Err(_) => break,
            }
        } else {
            delta = 0.25 * moved;
        }
    }
    (x, it)
}

/// Local minimization from `initial`, plus extra starts when enabled.
pub fn optimize_shift(co: &CompressedObjective, initial: Complex64, options: &OptimizeOptions) -> OptimizeResult {
    let bounds = co.bounds;
    let reduce = co.s() > 1
        && match options.tangential {
            TangentialPolicy::Always => true,
            TangentialPolicy::Never => false,
            TangentialPolicy::Auto => options.method == Method::NewtonTrust,
        };
    let work = if reduce { co.tangential_reduce() } else { co.clone() };
    let problem = Problem { co: &work, bounds, dims: if bounds.is_real() { 1 } else { 2 } };
    let merit = |z: Complex64| -> f64 {
        match options.method {
            Method::GaussNewton => nls_residual_jacobian(&work, z.re, z.im)
                .map(|(r, _)| r.iter().map(|v| v * v).sum())
                .unwrap_or(f64::INFINITY),
            Method::NewtonTrust => eval_objective(&work, z.re, z.im),
        }
    };

    let first = bounds.project(initial);
    let mut starts = vec![bounds.to_unit(first)];
    if options.multi_start {
        let mut grid_best = (f64::INFINITY, [0.5, 0.0]);
        let ny = if problem.dims == 2 { START_GRID } else { 1 };
        for i in 0..START_GRID {
            for k in 0..ny {
                let x = [i as f64 / (START_GRID - 1) as f64, if ny > 1 { k as f64 / (ny - 1) as f64 } else { 0.0 }];
                let v = merit(problem.point(x));
                if v < grid_best.0 {
                    grid_best = (v, x);
                }
            }
        }
        let mut eig_best = (f64::INFINITY, None);
        for z in co.eigenvalues() {
            let x = bounds.to_unit(z);
            let v = merit(problem.point(x));
            if v < eig_best.0 {
                eig_best = (v, Some(x));
            }
        }
        if grid_best.0.is_finite() {
            starts.push(grid_best.1);
        }
        if let Some(x) = eig_best.1 {
            starts.push(x);
        }
    }

    let mut best: Option<([f64; 2], f64, usize)> = None;
    let mut total_it = 0;
    for x0 in starts {
        if !merit(problem.point(x0)).is_finite() {
            continue;
        }
        let (x, it) = match options.method {
            Method::GaussNewton => gauss_newton(&problem, x0),
            Method::NewtonTrust => newton_trust(&problem, x0),
        };
        total_it += it;
        let v = merit(problem.point(x));
        if best.is_none_or(|b| v < b.1) {
            best = Some((x, v, it));
        }
    }
    match best {
        Some((x, _, _)) => {
            let alpha = problem.point(x);
            let value = eval_objective(co, alpha.re, alpha.im);
            // Transformed merits may disagree with ψ; never return worse
            // than the start in ψ itself.
            let start_value = eval_objective(co, first.re, first.im);
            if start_value < value {
                OptimizeResult { alpha: first, value: start_value, iterations: total_it, degraded: false }
            } else {
                OptimizeResult { alpha, value, iterations: total_it, degraded: false }
            }
        }
        None => OptimizeResult {
            alpha: first,
            value: eval_objective(co, first.re, first.im),
            iterations: 0,
            degraded: true,
        },
    }
}
