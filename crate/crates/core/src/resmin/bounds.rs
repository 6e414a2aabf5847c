//! Box constraints for the shift optimization from the compressed spectrum.

use num_complex::Complex64;

/// Relative size of imaginary parts below which the spectrum counts as
/// real and the optimization runs on the real axis.
pub const REAL_SPECTRUM_TOL: f64 = 1e-8;

/// `ν ∈ [nu_lo, nu_hi]`, `ξ ∈ [0, xi_hi]` for `α = ν + iξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub nu_lo: f64,
    pub nu_hi: f64,
    pub xi_hi: f64,
}

impl Bounds {
    pub fn new(nu_lo: f64, nu_hi: f64, xi_hi: f64) -> Self {
        debug_assert!(nu_lo < nu_hi && nu_hi < 0.0 && xi_hi >= 0.0);
        Self { nu_lo, nu_hi, xi_hi }
    }

    pub fn is_real(&self) -> bool {
        self.xi_hi == 0.0
    }

    pub fn contains(&self, alpha: Complex64) -> bool {
        alpha.re >= self.nu_lo && alpha.re <= self.nu_hi && alpha.im >= 0.0 && alpha.im <= self.xi_hi
    }

    /// Closest point of the box to `Complex(ν, |ξ|)`.
    pub fn project(&self, alpha: Complex64) -> Complex64 {
        Complex64::new(alpha.re.clamp(self.nu_lo, self.nu_hi), alpha.im.abs().min(self.xi_hi))
    }

    /// Unit-box coordinates of a point.
    pub fn to_unit(&self, alpha: Complex64) -> [f64; 2] {
        let p = self.project(alpha);
        let x1 = (p.re - self.nu_lo) / (self.nu_hi - self.nu_lo);
        let x2 = if self.is_real() { 0.0 } else { p.im / self.xi_hi };
        [x1, x2]
    }

    pub fn from_unit(&self, x: [f64; 2]) -> Complex64 {
        Complex64::new(self.nu_lo + x[0].clamp(0.0, 1.0) * (self.nu_hi - self.nu_lo), x[1].clamp(0.0, 1.0) * self.xi_hi)
    }

    /// Derivative of `(ν, ξ)` with respect to the unit coordinates.
    pub fn scale(&self) -> [f64; 2] {
        [self.nu_hi - self.nu_lo, self.xi_hi]
    }
}

/// Bounds from (stabilized) eigenvalues: the range of real parts, widened
/// to `[1.5ν, 0.5ν]` when it collapses to one value, and the largest
/// imaginary part, zero for a real spectrum.
pub fn derive_bounds(eigenvalues: &[Complex64]) -> Bounds {
    assert!(!eigenvalues.is_empty(), "bounds of an empty spectrum");
    let scale = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut lo = eigenvalues.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let mut hi = eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    if hi >= 0.0 {
        // Stabilization guarantees negative real parts; keep the box valid
        // for marginal inputs anyway.
        hi = -1e-8 * scale.max(f64::MIN_POSITIVE);
        lo = lo.min(2.0 * hi);
    }
    if hi - lo <= 1e-12 * lo.abs() {
        let nu = hi;
        lo = 1.5 * nu;
        hi = 0.5 * nu;
    }
    let xi = eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let xi_hi = if xi <= REAL_SPECTRUM_TOL * scale { 0.0 } else { xi };
    Bounds::new(lo, hi, xi_hi)
}
