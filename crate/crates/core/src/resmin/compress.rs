//! Projection subspaces for the residual objective.
//!
//! - `Z(h)`: the span of the last `h` steps of the factor, restricted via
//!   the factored Sylvester relation (see [`window_restriction`]).
//! - Recycled extended Krylov: the seed `Q_B` extended by `ω = Z Q_S`,
//!   where `Q_S` spans `EK_{p,m}(S_r, G_r)`. Because
//!   `M⁻¹A Z = Z S_r + M⁻¹B G_rᵀ`, the product `M⁻¹A ω` needs no large
//!   matrix-vector products.

use log::warn;
use nalgebra::DMatrix;

use super::seed::KrylovSeed;
use crate::error::{Error, Result};
use crate::linalg::dense::{singular_extremes, thin_qr};
use crate::linalg::{block_orth, DEFAULT_DROP_TOL};
use crate::lradi::{real_structure, AdiState, Pencil};
use crate::shifts::ritz::{window_restriction, Restriction, COND_LIMIT};

/// Restriction onto the last `h` steps of `Z`.
pub fn compress_zh(state: &AdiState, pencil: &Pencil<'_>, h: usize) -> Result<Restriction> {
    window_restriction(state, pencil, h)
}

/// Orthonormal basis of `EK_{p,m}(S, G)` for small dense `S`.
pub fn small_extended_krylov(s: &DMatrix<f64>, g: &DMatrix<f64>, p: usize, m: usize) -> Result<DMatrix<f64>> {
    let first = block_orth(None, g, DEFAULT_DROP_TOL);
    if first.added() == 0 {
        return Err(Error::Contract("zero generating block".into()));
    }
    let lu = s.clone().lu();
    let mut basis: Option<DMatrix<f64>> = (p >= 1).then(|| first.basis.clone());
    let mut pos = first.basis.clone();
    let mut neg = first.basis;
    let append = |basis: &mut Option<DMatrix<f64>>, y: &DMatrix<f64>| -> Option<DMatrix<f64>> {
        let res = block_orth(basis.as_ref(), y, DEFAULT_DROP_TOL);
        let k0 = basis.as_ref().map_or(0, |b| b.ncols());
        if res.added() == 0 {
            return None;
        }
        let fresh = res.basis.columns(k0, res.added()).into_owned();
        *basis = Some(res.basis);
        Some(fresh)
    };
    let (mut pos_alive, mut neg_alive) = (true, true);
    for k in 0..p.max(m) {
        if neg_alive && k < m {
            let y = lu.solve(&neg).ok_or_else(|| Error::Contract("S is singular".into()))?;
            match append(&mut basis, &y) {
                Some(f) => neg = f,
                None => neg_alive = false,
            }
        }
        if pos_alive && k + 1 < p {
            match append(&mut basis, &(s * &pos)) {
                Some(f) => pos = f,
                None => pos_alive = false,
            }
        }
    }
    basis.ok_or_else(|| Error::Contract("empty extended Krylov space".into()))
}

/// Recycled extended Krylov restriction at the current iterate.
///
/// The basis is `Q_j = orth[Q_B, ω]` and the projected operator
/// `H_j = Q_jᵀ [P_B, P_Z]` with `P_Z = (M⁻¹A ω_K − P_B C_B) R_KK⁻¹` for the
/// kept columns `K` of `ω`. When `R_KK` is ill conditioned `P_Z` is formed
/// with explicit products.
pub fn recycle_krylov(
    seed: &KrylovSeed,
    state: &AdiState,
    pencil: &Pencil<'_>,
    p: usize,
    m: usize,
) -> Result<Restriction> {
    let j = state.iteration();
    let s = state.s();
    let w_m = state.w_mass();
    let kb = seed.dim();
    let (q, h, explicit) = if j == 0 {
        (seed.q.clone(), seed.h_b.clone(), true)
    } else {
        let (sr, gr) = real_structure(&state.shifts, s);
        let z = state.z();
        let (omega, a_omega) = if z.ncols() <= (p + m) * s {
            let omega = z.into_owned();
            let a_omega = &seed.b_m * gr.transpose() + &omega * &sr;
            (omega, a_omega)
        } else {
            let qs = small_extended_krylov(&sr, &gr, p, m)?;
            let omega = z * &qs;
            let a_omega = &seed.b_m * (gr.transpose() * &qs) + z * (&sr * &qs);
            (omega, a_omega)
        };
        let orth = block_orth(Some(&seed.q), &omega, DEFAULT_DROP_TOL);
        let added = orth.added();
        let q = orth.basis;
        let mut p_all = DMatrix::zeros(q.nrows(), kb + added);
        p_all.columns_mut(0, kb).copy_from(&seed.p_b);
        let mut explicit = false;
        if added > 0 {
            let cb = DMatrix::from_fn(kb, added, |r, c| orth.coeffs[(r, orth.kept[c])]);
            let rkk = DMatrix::from_fn(added, added, |r, c| orth.coeffs[(kb + r, orth.kept[c])]);
            let (smin, smax) = singular_extremes(&rkk);
            let pz = if smin > 0.0 && smax / smin <= COND_LIMIT {
                let a_k = DMatrix::from_fn(q.nrows(), added, |r, c| a_omega[(r, orth.kept[c])]);
                let lhs = a_k - &seed.p_b * cb;
                // P_Z R = lhs  ⇔  Rᵀ P_Zᵀ = lhsᵀ.
                rkk.transpose()
                    .solve_lower_triangular(&lhs.transpose())
                    .ok_or_else(|| Error::Contract("recycled factor is singular".into()))?
                    .transpose()
            } else {
                warn!("recycled block is ill conditioned (cond {:.2e}); using explicit products", smax / smin);
                explicit = true;
                pencil.apply_am(&q.columns(kb, added).into_owned())
            };
            p_all.columns_mut(kb, added).copy_from(&pz);
        }
        let h = q.transpose() * p_all;
        (q, h, explicit)
    };
    let w_tilde = q.transpose() * w_m;
    let mass_weight = pencil.is_generalized().then(|| thin_qr(&pencil.apply_m(&q)).1);
    Ok(Restriction { q, h, w_tilde, mass_weight, explicit })
}
