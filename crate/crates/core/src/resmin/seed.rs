//! Extended Krylov seed space `EK_{p,m}(A, B)`, built once per solve.
//!
//! The space is spanned by `B, AB, …, A^{p−1}B` and
//! `A⁻¹B, …, A^{−m}B`, with `A, B` replaced by `M⁻¹A, M⁻¹B` for
//! generalized problems. The inverse direction may use a real pole `φ`,
//! i.e. `(A − φM)⁻¹M` in place of `A⁻¹M`. With `p = 0` the block `B` only
//! generates the inverse powers and is not part of the space.

use log::debug;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::dense::thin_qr;
use crate::linalg::{block_orth, DEFAULT_DROP_TOL};
use crate::lradi::Pencil;
use crate::shifts::ritz::Restriction;

#[derive(Debug, Clone)]
pub struct KrylovSeed {
    /// Orthonormal basis `Q_B`.
    pub q: DMatrix<f64>,
    /// `P_B = M⁻¹A Q_B`.
    pub p_b: DMatrix<f64>,
    /// `H_B = Q_Bᵀ P_B`.
    pub h_b: DMatrix<f64>,
    /// `Q_B[:, :k] η = M⁻¹B` when `p ≥ 1`.
    pub eta: Option<DMatrix<f64>>,
    /// Generating block `M⁻¹B`.
    pub b_m: DMatrix<f64>,
    /// Orders actually reached before a block fell out by rank drops.
    pub orders: (usize, usize),
}

impl KrylovSeed {
    /// `EK_{p,m}` of the problem's `B`.
    pub fn build(pencil: &Pencil<'_>, p: usize, m: usize, phi: Option<f64>) -> Result<Self> {
        Self::build_for(pencil, &pencil.problem().b, p, m, phi)
    }

    /// `EK_{p,m}` of an arbitrary block `rhs`.
    pub fn build_for(pencil: &Pencil<'_>, rhs: &DMatrix<f64>, p: usize, m: usize, phi: Option<f64>) -> Result<Self> {
        if p + m == 0 {
            return Err(Error::Config("extended Krylov orders p + m must be positive".into()));
        }
        let b_m = pencil.solve_m(rhs);
        let first = block_orth(None, &b_m, DEFAULT_DROP_TOL);
        if first.added() == 0 {
            return Err(Error::Contract("right-hand side block is zero".into()));
        }
        let inverse = if m > 0 {
            let mut f = pencil.factorizer()?;
            let pole = phi.unwrap_or(0.0);
            Some(f.factorize(Complex64::new(-pole, 0.0)).map_err(|e| {
                Error::Contract(format!("extended Krylov pole {pole} is unusable: {e}"))
            })?)
        } else {
            None
        };

        let mut q: Option<DMatrix<f64>> = None;
        let mut eta = None;
        let mut reached = (0, 0);
        if p >= 1 {
            eta = Some(first.coeffs.clone());
            q = Some(first.basis.clone());
            reached.0 = 1;
        }
        let mut pos_last = first.basis.clone();
        let mut neg_last = first.basis;
        let (mut pos_alive, mut neg_alive) = (true, true);

        let append = |q: &mut Option<DMatrix<f64>>, block: &DMatrix<f64>| -> Option<DMatrix<f64>> {
            let res = block_orth(q.as_ref(), block, DEFAULT_DROP_TOL);
            let k0 = q.as_ref().map_or(0, |b| b.ncols());
            let added = res.added();
            if added == 0 {
                return None;
            }
            let fresh = res.basis.columns(k0, added).into_owned();
            *q = Some(res.basis);
            Some(fresh)
        };

        for k in 0..p.max(m) {
            if neg_alive && k < m {
                let lu = inverse.as_ref().expect("inverse factorization exists when m > 0");
                let y = lu.solve_real(&pencil.apply_m(&neg_last))?;
                match append(&mut q, &y) {
                    Some(fresh) => {
                        neg_last = fresh;
                        reached.1 += 1;
                    }
                    None => neg_alive = false,
                }
            }
            if pos_alive && k + 1 < p {
                let y = pencil.apply_am(&pos_last);
                match append(&mut q, &y) {
                    Some(fresh) => {
                        pos_last = fresh;
                        reached.0 += 1;
                    }
                    None => pos_alive = false,
                }
            }
        }
        if reached != (p, m) {
            debug!("extended Krylov space stopped at orders {reached:?} of ({p}, {m})");
        }
        let q = q.ok_or_else(|| Error::Contract("extended Krylov space is empty".into()))?;
        let p_b = pencil.apply_am(&q);
        let h_b = q.transpose() * &p_b;
        Ok(Self { q, p_b, h_b, eta, b_m, orders: reached })
    }

    pub fn dim(&self) -> usize {
        self.q.ncols()
    }

    /// Galerkin data for the first shift, with the residual `M⁻¹B`.
    pub fn restriction(&self, pencil: &Pencil<'_>) -> Restriction {
        let w_tilde = self.q.transpose() * &self.b_m;
        let mass_weight = pencil.is_generalized().then(|| thin_qr(&pencil.apply_m(&self.q)).1);
        Restriction { q: self.q.clone(), h: self.h_b.clone(), w_tilde, mass_weight, explicit: true }
    }
}
