//! Shifts from the projected residual Hamiltonian
//!
//! ```text
//! [ H*     0 ]
//! [ W̃W̃*  −H ]
//! ```
//!
//! whose stable eigenvalues are those of `H*`. With `H = U T U*` in Schur
//! form each stable eigenvector `[p; q]` is available by one forward
//! substitution with `T*` and one shifted back substitution with `T`.

use log::warn;
use num_complex::Complex64;

use super::upper_half;
use crate::linalg::dense::solve_shifted_upper;
use crate::linalg::CMatrix;

/// Stable eigenvalue whose unit eigenvector has the largest lower block
/// `q`, with `Im ≥ 0`. `t` is upper triangular, `w` the compressed residual
/// in the same basis.
pub fn hamiltonian_residual_shift(t: &CMatrix, w: &CMatrix) -> Complex64 {
    let l = t.nrows();
    let mut best: Option<(f64, Complex64)> = None;
    for k in 0..l {
        let lambda = t[(k, k)].conj();
        if lambda.re >= 0.0 {
            continue;
        }
        let p = tstar_eigenvector(t, k, lambda);
        let rhs = w * (w.adjoint() * &p);
        let mut q = rhs;
        if !solve_shifted_upper(t, lambda, &mut q) {
            continue;
        }
        let norm = (p.norm_squared() + q.norm_squared()).sqrt();
        let qn = q.norm() / norm;
        if !qn.is_finite() {
            continue;
        }
        if best.is_none_or(|(b, _)| qn > b) {
            best = Some((qn, lambda));
        }
    }
    match best {
        Some((_, lambda)) => upper_half(lambda),
        None => {
            warn!("no stable Hamiltonian eigenvalue; using the leftmost Ritz value");
            let mut z = t[(0, 0)];
            for k in 1..l {
                if t[(k, k)].re < z.re {
                    z = t[(k, k)];
                }
            }
            upper_half(Complex64::new(-z.re.abs(), z.im))
        }
    }
}

/// Eigenvector of the lower-triangular `T*` for its `k`-th diagonal entry.
fn tstar_eigenvector(t: &CMatrix, k: usize, lambda: Complex64) -> CMatrix {
    let l = t.nrows();
    let scale = t.norm().max(f64::MIN_POSITIVE);
    let mut p = CMatrix::zeros(l, 1);
    p[k] = Complex64::new(1.0, 0.0);
    for i in k + 1..l {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in k..i {
            acc += t[(m, i)].conj() * p[m];
        }
        let mut d = t[(i, i)].conj() - lambda;
        if d.norm() < 1e-14 * scale {
            d = Complex64::new(1e-14 * scale, 0.0);
        }
        p[i] = -acc / d;
    }
    p
}
