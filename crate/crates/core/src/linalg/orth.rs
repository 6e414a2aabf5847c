//! Block Gram–Schmidt orthogonalization with rank-revealing drops.

use nalgebra::DMatrix;

/// Default drop tolerance, relative to the largest column norm of the
/// incoming block.
pub const DEFAULT_DROP_TOL: f64 = 1e-10;

/// Result of appending a block to an orthonormal basis.
#[derive(Debug, Clone)]
pub struct Orthogonalized {
    /// Existing columns followed by the newly accepted ones.
    pub basis: DMatrix<f64>,
    /// `basis.ncols() × new.ncols()` coefficients with `new ≈ basis·coeffs`;
    /// exact up to the residuals of dropped columns.
    pub coeffs: DMatrix<f64>,
    /// Indices of incoming columns that contributed a new basis vector, in
    /// the order their vectors were appended.
    pub kept: Vec<usize>,
}

impl Orthogonalized {
    pub fn added(&self) -> usize {
        self.kept.len()
    }
}

/// Orthogonalizes `new` against `existing` and itself.
///
/// Every column receives two full classical Gram–Schmidt passes. A column
/// whose remaining norm falls below `drop_tol` times the largest incoming
/// column norm is dropped.
pub fn block_orth(existing: Option<&DMatrix<f64>>, new: &DMatrix<f64>, drop_tol: f64) -> Orthogonalized {
    let n = new.nrows();
    let k0 = existing.map_or(0, |e| e.ncols());
    if let Some(e) = existing {
        assert_eq!(e.nrows(), n, "basis and block row counts differ");
    }
    let scale = (0..new.ncols()).map(|j| new.column(j).norm()).fold(0.0, f64::max);
    let threshold = drop_tol * scale;

    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut coeff_cols: Vec<Vec<f64>> = Vec::with_capacity(new.ncols());
    let mut kept = Vec::new();
    let existing_data: &[f64] = existing.map_or(&[], |e| e.as_slice());

    for j in 0..new.ncols() {
        let mut v: Vec<f64> = new.column(j).iter().copied().collect();
        let total = k0 + cols.len();
        let mut coeff = vec![0.0; total];
        for _pass in 0..2 {
            let mut h = vec![0.0; total];
            for (k, hk) in h.iter_mut().enumerate() {
                *hk = dot(column(existing_data, &cols, n, k), &v);
            }
            for (k, &hk) in h.iter().enumerate() {
                if hk != 0.0 {
                    axpy(-hk, column(existing_data, &cols, n, k), &mut v);
                }
                coeff[k] += hk;
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > threshold && norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
            coeff.push(norm);
            cols.push(v);
            kept.push(j);
        }
        coeff_cols.push(coeff);
    }

    let total = k0 + cols.len();
    let mut basis = DMatrix::zeros(n, total);
    if let Some(e) = existing {
        basis.columns_mut(0, k0).copy_from(e);
    }
    for (k, c) in cols.iter().enumerate() {
        basis.column_mut(k0 + k).copy_from_slice(c);
    }
    let mut coeffs = DMatrix::zeros(total, new.ncols());
    for (j, c) in coeff_cols.iter().enumerate() {
        for (k, &v) in c.iter().enumerate() {
            coeffs[(k, j)] = v;
        }
    }
    Orthogonalized { basis, coeffs, kept }
}

fn column<'a>(existing: &'a [f64], added: &'a [Vec<f64>], n: usize, k: usize) -> &'a [f64] {
    let k0 = existing.len() / n.max(1);
    if k < k0 {
        &existing[k * n..(k + 1) * n]
    } else {
        &added[k - k0]
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(n: usize, k: usize) -> DMatrix<f64> {
        let mut v = DMatrix::zeros(n, 1);
        v[k] = 1.0;
        v
    }

    #[test]
    fn augments_with_orthogonal_direction() {
        let e1 = e(3, 0);
        let new = &e1 + e(3, 1);
        let out = block_orth(Some(&e1), &new, DEFAULT_DROP_TOL);
        assert_eq!(out.basis.ncols(), 2);
        assert!((out.basis.column(1) - e(3, 1).column(0)).norm() < 1e-15);
        assert!((&out.basis * &out.coeffs - &new).norm() < 1e-15);
    }

    #[test]
    fn identical_columns_drop_one() {
        let v = DMatrix::from_column_slice(3, 2, &[1.0, 2.0, 3.0, 1.0, 2.0, 3.0]);
        let out = block_orth(None, &v, DEFAULT_DROP_TOL);
        assert_eq!(out.kept, vec![0]);
        assert!((&out.basis * &out.coeffs - &v).norm() < 1e-14);
    }

    #[test]
    fn orthonormal_block_against_itself_adds_nothing() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = DMatrix::from_fn(20, 4, |_, _| rng.random_range(-1.0..1.0));
        let q = block_orth(None, &a, DEFAULT_DROP_TOL).basis;
        let out = block_orth(Some(&q), &q, DEFAULT_DROP_TOL);
        assert_eq!(out.added(), 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn projector_and_orthonormality(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = DMatrix::from_fn(40, 4, |_, _| rng.random_range(-1.0..1.0));
            let q0 = block_orth(None, &base, DEFAULT_DROP_TOL).basis;
            let new = DMatrix::from_fn(40, 6, |_, _| rng.random_range(-1.0..1.0));
            let out = block_orth(Some(&q0), &new, DEFAULT_DROP_TOL);
            let q = &out.basis;
            prop_assert!((q.transpose() * q - DMatrix::identity(10, 10)).norm() <= 1e-12);
            // Projector onto span of [q0, new] built independently via SVD.
            let mut joined = DMatrix::zeros(40, 10);
            joined.columns_mut(0, 4).copy_from(&q0);
            joined.columns_mut(4, 6).copy_from(&new);
            let svd = joined.svd(true, false);
            let u = svd.u.unwrap();
            let p_ref = &u * u.transpose();
            let p = q * q.transpose();
            prop_assert!((p - p_ref).norm() <= 1e-10);
            prop_assert!((q * &out.coeffs - &new).norm() <= 1e-12 * new.norm());
        }
    }
}
