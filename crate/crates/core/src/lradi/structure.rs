//! Small matrices `S`, `G` describing the iterates through the Sylvester
//! relations
//!
//! ```text
//! A Z − M Z S = B Gᵀ,    W = B + M Z G,
//! ```
//!
//! with `S` upper triangular, `S_ii = −α_i`, `S_ik = γ_i γ_k` (`i < k`) and
//! `G = [γ_1, …, γ_j]ᵀ ⊗ I_s`. When complex pairs are realized by double
//! steps the stored factor is `Z_r = Z_c U` for a block-diagonal `U`, and
//! the relations hold with `S_r = U⁻¹ S U` and `G_r = Uᵀ G`, both real.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::ShiftRecord;
use crate::linalg::CMatrix;

fn kron_identity<T: nalgebra::ComplexField + Copy>(a: &DMatrix<T>, s: usize) -> DMatrix<T> {
    let mut out = DMatrix::zeros(a.nrows() * s, a.ncols() * s);
    for c in 0..a.ncols() {
        for r in 0..a.nrows() {
            for k in 0..s {
                out[(r * s + k, c * s + k)] = a[(r, c)];
            }
        }
    }
    out
}

fn scalar_sg(shifts: &[ShiftRecord]) -> (CMatrix, DMatrix<f64>) {
    let j = shifts.len();
    let mut s = CMatrix::zeros(j, j);
    for k in 0..j {
        s[(k, k)] = -shifts[k].alpha;
        for i in 0..k {
            s[(i, k)] = Complex64::new(shifts[i].gamma * shifts[k].gamma, 0.0);
        }
    }
    let g = DMatrix::from_iterator(j, 1, shifts.iter().map(|r| r.gamma));
    (s, g)
}

/// Complex `S` and real `G` for the shift history, block size `s`.
pub fn build_sg(shifts: &[ShiftRecord], s: usize) -> (CMatrix, DMatrix<f64>) {
    let (sc, g) = scalar_sg(shifts);
    (kron_identity(&sc, s), kron_identity(&g, s))
}

/// Scalar-level block-diagonal `U` with `Z_r = Z_c (U ⊗ I_s)`.
fn realification(shifts: &[ShiftRecord]) -> CMatrix {
    let j = shifts.len();
    let mut u = CMatrix::identity(j, j);
    let mut k = 0;
    while k < j {
        let r = shifts[k];
        if r.is_complex() && k + 1 < j {
            let (a, b) = (r.alpha.re, r.alpha.im);
            let delta = a / b;
            let gp = 2.0 * (-a).sqrt();
            let i = Complex64::i();
            // [V, V̄ + 2δ Im V] = [Re V, Im V] C and Z_r block = [Re V, Im V] D.
            let c = CMatrix::from_row_slice(2, 2, &[1.0.into(), 1.0.into(), i, Complex64::new(2.0 * delta, -1.0)]);
            let d = CMatrix::from_row_slice(
                2,
                2,
                &[gp.into(), 0.0.into(), (gp * delta).into(), (gp * (delta * delta + 1.0).sqrt()).into()],
            );
            let blk = (c * Complex64::new(r.gamma, 0.0)).try_inverse().expect("pair transform is invertible") * d;
            u.view_mut((k, k), (2, 2)).copy_from(&blk);
            k += 2;
        } else {
            k += 1;
        }
    }
    u
}

/// Real `S_r` and `G_r` matching the stored (double-stepped) factor.
pub fn real_structure(shifts: &[ShiftRecord], s: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let (sc, g) = scalar_sg(shifts);
    if shifts.iter().all(|r| !r.is_complex()) {
        return (kron_identity(&sc.map(|z| z.re), s), kron_identity(&g, s));
    }
    let u = realification(shifts);
    let uinv = u.clone().try_inverse().expect("block-diagonal transform is invertible");
    let sr = &uinv * sc * &u;
    let gr = u.transpose() * g.map(|v| Complex64::new(v, 0.0));
    debug_assert!(sr.iter().all(|z| z.im.abs() <= 1e-8 * (1.0 + z.norm())));
    (kron_identity(&sr.map(|z| z.re), s), kron_identity(&gr.map(|z| z.re), s))
}

/// `X = G Gᵀ − S` (real structured), which satisfies
/// `A Z = W Gᵀ − M Z X` and is block lower triangular at pair granularity.
pub fn residual_coupling(sr: &DMatrix<f64>, gr: &DMatrix<f64>) -> DMatrix<f64> {
    gr * gr.transpose() - sr
}
