//! Compressed residual objective and its derivatives.
//!
//! For `α = ν + iξ` with `L = T + αI` and `C = I − 2νL⁻¹`,
//!
//! ```text
//! Ψ(α) = R C^g W̃,          ψ(ν, ξ) = ‖Ψ‖₂² = θ₁(Ψ*Ψ),
//! ```
//!
//! where `T` is the Schur factor of the stabilized restriction, `W̃` the
//! rotated compressed residual and `R` the optional mass weighting. All
//! powers of `L⁻¹` commute, so
//!
//! ```text
//! C_ν = −2L⁻¹ + 2νL⁻²,   C_ξ = 2iνL⁻²,
//! C_νν = 4L⁻² − 4νL⁻³,   C_νξ = 2iL⁻² − 4iνL⁻³,   C_ξξ = 4νL⁻³,
//! Ψ_a = g R C_a C^{g−1} W̃,
//! Ψ_ab = R [g(g−1) C_a C_b C^{g−2} + g C_ab C^{g−1}] W̃.
//! ```
//!
//! Derivatives of `θ₁` follow from Hermitian eigenvalue perturbation of
//! the Gram matrix. The least-squares route uses the Wirtinger derivatives
//! `∂Ψ/∂α = −g R L⁻¹ C^g W̃` and `∂Ψ/∂ᾱ = −g R L⁻¹ C^{g−1} W̃` instead.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::bounds::{derive_bounds, Bounds};
use crate::error::{Error, Result};
use crate::linalg::dense::{dense_eig_hermitian, dominant_right_singular, solve_shifted_upper};
use crate::linalg::{spectral_norm_sq, CMatrix};
use crate::shifts::ritz::RitzData;

/// Relative Gram eigenvalue gap below which `θ₁` is treated as non-smooth.
pub const GAP_TOL: f64 = 1e-10;

/// `‖R C(T, α)^g W̃‖²` on compressed data.
#[derive(Debug, Clone)]
pub struct CompressedObjective {
    /// Upper-triangular Schur factor with eigenvalues in the open left half
    /// plane.
    pub t: CMatrix,
    /// Compressed residual in the Schur basis.
    pub w: CMatrix,
    /// Mass weighting in the Schur basis.
    pub weight: Option<CMatrix>,
    pub g: usize,
    pub bounds: Bounds,
}

impl CompressedObjective {
    pub fn new(t: CMatrix, w: CMatrix, weight: Option<CMatrix>, g: usize) -> Result<Self> {
        if g == 0 {
            return Err(Error::Config("multistep power g must be at least 1".into()));
        }
        if t.nrows() != t.ncols() || w.nrows() != t.nrows() {
            return Err(Error::Dimension(format!("T is {}x{}, W̃ is {}x{}", t.nrows(), t.ncols(), w.nrows(), w.ncols())));
        }
        let eig: Vec<Complex64> = (0..t.nrows()).map(|k| t[(k, k)]).collect();
        if eig.iter().any(|z| !(z.re < 0.0)) {
            return Err(Error::Contract("compressed spectrum is not stable".into()));
        }
        let bounds = derive_bounds(&eig);
        Ok(Self { t, w, weight, g, bounds })
    }

    pub fn from_ritz(data: &RitzData, g: usize) -> Result<Self> {
        Self::new(data.schur.t.clone(), data.w_rot.clone(), data.weight_rot.clone(), g)
    }

    pub fn dim(&self) -> usize {
        self.t.nrows()
    }

    pub fn s(&self) -> usize {
        self.w.ncols()
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|k| self.t[(k, k)]).collect()
    }

    fn weigh(&self, x: CMatrix) -> CMatrix {
        match &self.weight {
            Some(r) => r * x,
            None => x,
        }
    }

    /// `L⁻¹ x`, or `None` when `T + αI` is singular.
    fn solve(&self, alpha: Complex64, x: &CMatrix) -> Option<CMatrix> {
        let mut y = x.clone();
        solve_shifted_upper(&self.t, alpha, &mut y).then_some(y)
    }

    /// `C^k W̃`.
    fn cayley_power(&self, alpha: Complex64, k: usize) -> Option<CMatrix> {
        let nu = Complex64::new(2.0 * alpha.re, 0.0);
        let mut y = self.w.clone();
        for _ in 0..k {
            let l = self.solve(alpha, &y)?;
            y -= l * nu;
        }
        Some(y)
    }

    /// `Ψ(α) = R C^g W̃`.
    pub fn psi(&self, alpha: Complex64) -> Option<CMatrix> {
        self.cayley_power(alpha, self.g).map(|y| self.weigh(y))
    }

    /// Single tangential direction: `W̃ ← W̃ t` with `t` the dominant right
    /// singular vector of `W̃`.
    pub fn tangential_reduce(&self) -> Self {
        let (_, t) = dominant_right_singular(&self.w);
        let w = CMatrix::from_column_slice(self.w.nrows(), 1, (&self.w * t).as_slice());
        Self { t: self.t.clone(), w, weight: self.weight.clone(), g: self.g, bounds: self.bounds }
    }
}

/// `ψ(ν, ξ)`, `+∞` at singular shifts.
pub fn eval_objective(co: &CompressedObjective, nu: f64, xi: f64) -> f64 {
    match co.psi(Complex64::new(nu, xi)) {
        Some(p) => {
            let v = spectral_norm_sq(&p);
            if v.is_finite() {
                v
            } else {
                f64::INFINITY
            }
        }
        None => f64::INFINITY,
    }
}

/// Cached quantities at one point.
#[derive(Debug, Clone, Default)]
pub struct DerivativeWorkspace {
    pub alpha: Option<Complex64>,
    pub psi: CMatrix,
    /// `[Ψ_ν, Ψ_ξ]`.
    pub d1: Vec<CMatrix>,
    /// `[Ψ_νν, Ψ_νξ, Ψ_ξξ]` when second derivatives were requested.
    pub d2: Vec<CMatrix>,
    /// Gram eigenvalues in descending order with eigenvectors.
    pub theta: Vec<f64>,
    pub u: CMatrix,
}

impl DerivativeWorkspace {
    pub fn new() -> Self {
        Self::default()
    }

    fn fill(&mut self, co: &CompressedObjective, alpha: Complex64, second: bool) -> Result<()> {
        if self.alpha == Some(alpha) && (!second || !self.d2.is_empty()) {
            return Ok(());
        }
        let singular = || Error::SingularShift { shift: alpha, detail: "compressed shifted matrix is singular".into() };
        let g = co.g;
        let gc = Complex64::new(g as f64, 0.0);
        let nu = alpha.re;
        let c = |x: f64| Complex64::new(x, 0.0);
        let i = Complex64::i();
        let e = co.cayley_power(alpha, g - 1).ok_or_else(singular)?;
        let powers = |x: &CMatrix, k: usize| -> Result<Vec<CMatrix>> {
            let mut out = vec![x.clone()];
            for _ in 0..k {
                let next = co.solve(alpha, out.last().unwrap()).ok_or_else(singular)?;
                out.push(next);
            }
            Ok(out)
        };
        let ep = powers(&e, if second { 3 } else { 2 })?;
        let psi = &ep[0] - &ep[1] * c(2.0 * nu);
        let d_nu = (&ep[1] * c(-2.0) + &ep[2] * c(2.0 * nu)) * gc;
        let d_xi = &ep[2] * (c(2.0 * nu) * i * gc);
        let mut d2 = Vec::new();
        if second {
            let mut nn = (&ep[2] * c(4.0) - &ep[3] * c(4.0 * nu)) * gc;
            let mut nx = (&ep[2] * (c(2.0) * i) - &ep[3] * (c(4.0 * nu) * i)) * gc;
            let mut xx = &ep[3] * c(4.0 * nu) * gc;
            if g >= 2 {
                let f = co.cayley_power(alpha, g - 2).ok_or_else(singular)?;
                let fp = powers(&f, 4)?;
                let gg = c((g * (g - 1)) as f64);
                nn += (&fp[2] * c(4.0) - &fp[3] * c(8.0 * nu) + &fp[4] * c(4.0 * nu * nu)) * gg;
                nx += (&fp[3] * (c(-4.0 * nu) * i) + &fp[4] * (c(4.0 * nu * nu) * i)) * gg;
                xx += &fp[4] * c(-4.0 * nu * nu) * gg;
            }
            d2 = vec![co.weigh(nn), co.weigh(nx), co.weigh(xx)];
        }
        let psi = co.weigh(psi);
        let gram = psi.adjoint() * &psi;
        let (theta, u) = dense_eig_hermitian(&gram)?;
        self.alpha = Some(alpha);
        self.psi = psi;
        self.d1 = vec![co.weigh(d_nu), co.weigh(d_xi)];
        self.d2 = d2;
        self.theta = theta;
        self.u = u;
        Ok(())
    }

    fn top_gap(&self) -> f64 {
        if self.theta.len() < 2 {
            f64::INFINITY
        } else {
            self.theta[0] - self.theta[1]
        }
    }

    /// `u_a* (Ψ_x* Ψ_y + Ψ_y* Ψ_x) u_b`, the perturbation of the Gram matrix.
    fn gram_term(&self, x: &CMatrix, y: &CMatrix, a: usize, b: usize) -> Complex64 {
        let ua = self.u.column(a);
        let ub = self.u.column(b);
        let xa = x * ua;
        let xb = x * ub;
        let ya = y * ua;
        let yb = y * ub;
        xa.dotc(&yb) + ya.dotc(&xb)
    }
}

fn check_smooth(ws: &DerivativeWorkspace, all: bool) -> Result<()> {
    let scale = ws.theta[0].abs().max(f64::MIN_POSITIVE);
    let gaps: Vec<f64> =
        if all { ws.theta.windows(2).map(|p| p[0] - p[1]).collect() } else { vec![ws.top_gap()] };
    for gap in gaps {
        if gap <= GAP_TOL * scale {
            return Err(Error::NonSmooth { gap });
        }
    }
    Ok(())
}

/// `(ψ, [∂ψ/∂ν, ∂ψ/∂ξ])`. Fails when the top Gram eigenvalue is not simple.
pub fn eval_gradient(
    co: &CompressedObjective,
    nu: f64,
    xi: f64,
    ws: &mut DerivativeWorkspace,
) -> Result<(f64, [f64; 2])> {
    ws.fill(co, Complex64::new(nu, xi), false)?;
    check_smooth(ws, false)?;
    let grad = [0, 1].map(|a| ws.gram_term(&ws.psi, &ws.d1[a], 0, 0).re);
    Ok((ws.theta[0], grad))
}

/// `(ψ, gradient, Hessian)`. Fails unless all Gram eigenvalues are
/// distinct.
pub fn eval_hessian(
    co: &CompressedObjective,
    nu: f64,
    xi: f64,
    ws: &mut DerivativeWorkspace,
) -> Result<(f64, [f64; 2], [[f64; 2]; 2])> {
    ws.fill(co, Complex64::new(nu, xi), true)?;
    check_smooth(ws, true)?;
    let grad = [0, 1].map(|a| ws.gram_term(&ws.psi, &ws.d1[a], 0, 0).re);
    let second = |a: usize, b: usize| -> f64 {
        let idx = a + b;
        // Ψ*Ψ_ab + Ψ_ab*Ψ + Ψ_a*Ψ_b + Ψ_b*Ψ_a.
        let mut v = ws.gram_term(&ws.psi, &ws.d2[idx], 0, 0).re + ws.gram_term(&ws.d1[a], &ws.d1[b], 0, 0).re;
        for k in 1..ws.theta.len() {
            let ga = ws.gram_term(&ws.psi, &ws.d1[a], 0, k);
            let gb = ws.gram_term(&ws.psi, &ws.d1[b], k, 0);
            v += 2.0 * (ga * gb).re / (ws.theta[0] - ws.theta[k]);
        }
        v
    };
    let h00 = second(0, 0);
    let h01 = second(0, 1);
    let h11 = second(1, 1);
    Ok((ws.theta[0], grad, [[h00, h01], [h01, h11]]))
}

/// Stacked real residual `[Re vec Ψ; Im vec Ψ]` and its `… × 2` Jacobian
/// with respect to `(ν, ξ)`, from the Wirtinger derivatives.
pub fn nls_residual_jacobian(co: &CompressedObjective, nu: f64, xi: f64) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let alpha = Complex64::new(nu, xi);
    let singular = || Error::SingularShift { shift: alpha, detail: "compressed shifted matrix is singular".into() };
    let gm = Complex64::new(-(co.g as f64), 0.0);
    let e = co.cayley_power(alpha, co.g - 1).ok_or_else(singular)?;
    let le = co.solve(alpha, &e).ok_or_else(singular)?;
    let raw = &e - &le * Complex64::new(2.0 * nu, 0.0);
    let lraw = co.solve(alpha, &raw).ok_or_else(singular)?;
    let d_alpha = co.weigh(lraw * gm);
    let d_conj = co.weigh(le * gm);
    let psi = co.weigh(raw);
    let d_nu = &d_alpha + &d_conj;
    let d_xi = (&d_alpha - &d_conj) * Complex64::i();
    let len = psi.len();
    let mut r = Vec::with_capacity(2 * len);
    r.extend(psi.iter().map(|z| z.re));
    r.extend(psi.iter().map(|z| z.im));
    let mut jac = DMatrix::zeros(2 * len, 2);
    for (k, (a, b)) in d_nu.iter().zip(d_xi.iter()).enumerate() {
        jac[(k, 0)] = a.re;
        jac[(k, 1)] = b.re;
        jac[(len + k, 0)] = a.im;
        jac[(len + k, 1)] = b.im;
    }
    Ok((r, jac))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dense_schur, stabilize_triangular, to_complex};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Random stable compressed objective with its dense data `(H, W)` in
    /// the original basis.
    fn random_objective(rng: &mut ChaCha8Rng, l: usize, s: usize, g: usize) -> (CompressedObjective, CMatrix, CMatrix) {
        let h = DMatrix::from_fn(l, l, |i, j| rng.random_range(-1.0..1.0) - if i == j { 2.5 } else { 0.0 });
        let w = DMatrix::from_fn(l, s, |_, _| rng.random_range(-1.0..1.0));
        let mut schur = dense_schur(&to_complex(&h)).unwrap();
        stabilize_triangular(&mut schur.t);
        let hs = &schur.q * &schur.t * schur.q.adjoint();
        let wc = to_complex(&w);
        let co = CompressedObjective::new(schur.t.clone(), schur.q.adjoint() * &wc, None, g).unwrap();
        (co, hs, wc)
    }

    fn random_point(rng: &mut ChaCha8Rng, b: &Bounds) -> (f64, f64) {
        let xi_hi = if b.is_real() { 1.0 } else { b.xi_hi };
        (rng.random_range(b.nu_lo..b.nu_hi), rng.random_range(0.0..xi_hi))
    }

    fn rel(a: f64, b: f64, scale: f64) -> f64 {
        (a - b).abs() / scale.max(1e-300)
    }

    #[test]
    fn exact_annihilation() {
        let co = CompressedObjective::new(CMatrix::from_element(1, 1, c(-1.0)), CMatrix::from_element(1, 1, c(1.0)), None, 1)
            .unwrap();
        assert_eq!(eval_objective(&co, -1.0, 0.0), 0.0);
        assert!(eval_objective(&co, 1.0, 0.0).is_infinite());
    }

    #[test]
    fn zero_real_part_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (co, _, _) = random_objective(&mut rng, 6, 2, 1);
        let base = spectral_norm_sq(&co.w);
        for xi in [0.0, 0.3, 4.0] {
            assert!(rel(eval_objective(&co, 0.0, xi), base, base) < 1e-13);
        }
    }

    #[test]
    fn matches_dense_cayley() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for g in [1, 3] {
            let (co, h, w) = random_objective(&mut rng, 6, 2, g);
            for _ in 0..20 {
                let (nu, xi) = random_point(&mut rng, &co.bounds);
                let a = Complex64::new(nu, xi);
                let id = CMatrix::identity(6, 6);
                let cay = (&h - &id * a.conj()) * (&h + &id * a).try_inverse().unwrap();
                let mut y = w.clone();
                for _ in 0..g {
                    y = &cay * y;
                }
                let want = spectral_norm_sq(&y);
                assert!(rel(eval_objective(&co, nu, xi), want, want) < 1e-12);
            }
        }
    }

    fn fd_gradient(co: &CompressedObjective, nu: f64, xi: f64, h: f64) -> [f64; 2] {
        [
            (eval_objective(co, nu + h, xi) - eval_objective(co, nu - h, xi)) / (2.0 * h),
            (eval_objective(co, nu, xi + h) - eval_objective(co, nu, xi - h)) / (2.0 * h),
        ]
    }

    fn check_gradient(s: usize, g: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checked = 0;
        while checked < 50 {
            let (co, _, _) = random_objective(&mut rng, 6, s, g);
            let (nu, xi) = random_point(&mut rng, &co.bounds);
            let mut ws = DerivativeWorkspace::new();
            let Ok((f, grad)) = eval_gradient(&co, nu, xi, &mut ws) else { continue };
            if ws.theta.len() > 1 && ws.top_gap() < 1e-6 * f {
                continue;
            }
            let fd = fd_gradient(&co, nu, xi, 1e-6);
            let scale = grad[0].hypot(grad[1]).max(1e-8 * f);
            for k in 0..2 {
                assert!(rel(grad[k], fd[k], scale) < 1e-5, "s={s} g={g} {grad:?} vs {fd:?}");
            }
            checked += 1;
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        check_gradient(1, 1, 3);
        check_gradient(3, 1, 4);
        check_gradient(1, 3, 5);
        check_gradient(2, 2, 6);
    }

    fn check_hessian(s: usize, g: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checked = 0;
        while checked < 30 {
            let (co, _, _) = random_objective(&mut rng, 6, s, g);
            let (nu, xi) = random_point(&mut rng, &co.bounds);
            let mut ws = DerivativeWorkspace::new();
            let Ok((_, _, hess)) = eval_hessian(&co, nu, xi, &mut ws) else { continue };
            if ws.theta.windows(2).any(|p| p[0] - p[1] < 1e-3 * ws.theta[0]) {
                continue;
            }
            assert_eq!(hess[0][1], hess[1][0]);
            let h = 1e-5;
            let mut w2 = DerivativeWorkspace::new();
            let gp = [eval_gradient(&co, nu + h, xi, &mut w2).unwrap().1, eval_gradient(&co, nu, xi + h, &mut w2).unwrap().1];
            let gm = [eval_gradient(&co, nu - h, xi, &mut w2).unwrap().1, eval_gradient(&co, nu, xi - h, &mut w2).unwrap().1];
            let scale = hess.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
            for a in 0..2 {
                for b in 0..2 {
                    let fd = (gp[b][a] - gm[b][a]) / (2.0 * h);
                    assert!(rel(hess[a][b], fd, scale) < 1e-4, "s={s} g={g} H={hess:?} entry ({a},{b}) fd {fd}");
                }
            }
            checked += 1;
        }
    }

    #[test]
    fn hessian_matches_finite_differences() {
        check_hessian(1, 1, 7);
        check_hessian(2, 1, 8);
        check_hessian(1, 2, 9);
        check_hessian(3, 3, 10);
    }

    #[test]
    fn real_symmetric_case_has_zero_xi_derivative() {
        let l = 5;
        let d = DMatrix::from_fn(l, l, |i, j| if i == j { -1.0 - i as f64 } else { 0.1 / (1 + i + j) as f64 });
        let mut schur = dense_schur(&to_complex(&d)).unwrap();
        stabilize_triangular(&mut schur.t);
        let w = schur.q.adjoint() * to_complex(&DMatrix::from_element(l, 1, 1.0));
        let co = CompressedObjective::new(schur.t, w, None, 1).unwrap();
        let mut ws = DerivativeWorkspace::new();
        let (_, grad) = eval_gradient(&co, -2.0, 0.0, &mut ws).unwrap();
        assert!(grad[1].abs() < 1e-12 * grad[0].abs().max(1.0));
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for g in [1, 2] {
            for _ in 0..50 {
                let (co, _, _) = random_objective(&mut rng, 6, 2, g);
                let (nu, xi) = random_point(&mut rng, &co.bounds);
                let (r, jac) = nls_residual_jacobian(&co, nu, xi).unwrap();
                let h = 1e-6;
                let scale = jac.norm();
                for (k, (dn, dx)) in [(h, 0.0), (0.0, h)].into_iter().enumerate() {
                    let rp = nls_residual_jacobian(&co, nu + dn, xi + dx).unwrap().0;
                    let rm = nls_residual_jacobian(&co, nu - dn, xi - dx).unwrap().0;
                    for i in 0..r.len() {
                        let fd = (rp[i] - rm[i]) / (2.0 * h);
                        assert!((jac[(i, k)] - fd).abs() <= 1e-6 * scale, "g={g} col {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn residual_norms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let (co, _, _) = random_objective(&mut rng, 6, 1, 1);
        let (r, _) = nls_residual_jacobian(&co, -2.0, 0.5).unwrap();
        let half: f64 = 0.5 * r.iter().map(|x| x * x).sum::<f64>();
        assert!(rel(half, 0.5 * eval_objective(&co, -2.0, 0.5), half) < 1e-13);
        let (co3, _, _) = random_objective(&mut rng, 6, 3, 1);
        let (r3, _) = nls_residual_jacobian(&co3, -2.0, 0.5).unwrap();
        let fro: f64 = r3.iter().map(|x| x * x).sum();
        assert!(fro >= eval_objective(&co3, -2.0, 0.5));
    }

    #[test]
    fn direct_and_wirtinger_first_derivatives_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let (co, _, _) = random_objective(&mut rng, 6, 1, 2);
        let mut ws = DerivativeWorkspace::new();
        let (_, grad) = eval_gradient(&co, -1.7, 0.4, &mut ws).unwrap();
        let (r, jac) = nls_residual_jacobian(&co, -1.7, 0.4).unwrap();
        // ψ = ‖r‖² at s = 1, so ∇ψ = 2 Jᵀ r.
        let rv = nalgebra::DVector::from_vec(r);
        let jt = jac.transpose() * rv * 2.0;
        for k in 0..2 {
            assert!(rel(grad[k], jt[k], jt.norm()) < 1e-11);
        }
    }

    #[test]
    fn tangential_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let (co, _, _) = random_objective(&mut rng, 6, 3, 1);
        let red = co.tangential_reduce();
        assert_eq!(red.s(), 1);
        let sigma = spectral_norm_sq(&co.w);
        assert!(rel(spectral_norm_sq(&red.w), sigma, sigma) < 1e-12);
        for _ in 0..1000 {
            let (nu, xi) = random_point(&mut rng, &co.bounds);
            assert!(eval_objective(&red, nu, xi) <= eval_objective(&co, nu, xi) * (1.0 + 1e-12));
        }
        // Rank-one residual loses nothing.
        let v = CMatrix::from_fn(6, 1, |_, _| c(rng.random_range(-1.0..1.0)));
        let u = CMatrix::from_fn(1, 3, |_, _| c(rng.random_range(-1.0..1.0)));
        let rank1 = CompressedObjective::new(co.t.clone(), &v * &u, None, 1).unwrap();
        let red1 = rank1.tangential_reduce();
        for _ in 0..20 {
            let (nu, xi) = random_point(&mut rng, &co.bounds);
            let (a, b) = (eval_objective(&rank1, nu, xi), eval_objective(&red1, nu, xi));
            assert!(rel(a, b, a) < 1e-10);
        }
    }

    #[test]
    fn scaling_residual_keeps_the_argmin() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let (co, _, _) = random_objective(&mut rng, 6, 2, 1);
        let mut scaled = co.clone();
        scaled.w *= c(7.0);
        let grid = |o: &CompressedObjective| {
            let b = o.bounds;
            let mut best = (f64::INFINITY, 0, 0);
            for i in 0..40 {
                for k in 0..40 {
                    let nu = b.nu_lo + (b.nu_hi - b.nu_lo) * i as f64 / 39.0;
                    let xi = b.xi_hi * k as f64 / 39.0;
                    let v = eval_objective(o, nu, xi);
                    if v < best.0 {
                        best = (v, i, k);
                    }
                }
            }
            best
        };
        let (a, b) = (grid(&co), grid(&scaled));
        assert_eq!((a.1, a.2), (b.1, b.2));
        assert!(rel(b.0, 49.0 * a.0, b.0) < 1e-12);
    }
}
