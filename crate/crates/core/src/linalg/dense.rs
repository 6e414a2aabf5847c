//! Small dense kernels at compressed scale: Schur form, Hermitian
//! eigenproblems, spectral norms of thin blocks and shifted triangular
//! solves.

use nalgebra::{ComplexField, DMatrix, Dyn, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Complex Schur decomposition `H = Q T Q*` with `T` upper triangular.
#[derive(Debug, Clone)]
pub struct SchurDecomposition {
    pub q: CMatrix,
    pub t: CMatrix,
}

impl SchurDecomposition {
    /// Eigenvalues in diagonal order.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.t.nrows()).map(|k| self.t[(k, k)]).collect()
    }
}

pub fn to_complex(a: &DMatrix<f64>) -> CMatrix {
    a.map(|v| Complex64::new(v, 0.0))
}

pub fn dense_schur(h: &CMatrix) -> Result<SchurDecomposition> {
    let n = h.nrows();
    if n != h.ncols() {
        return Err(Error::Dimension(format!("Schur form of a {}x{} matrix", n, h.ncols())));
    }
    if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Contract("non-finite entry in matrix passed to Schur".into()));
    }
    if n == 0 {
        return Ok(SchurDecomposition { q: CMatrix::zeros(0, 0), t: CMatrix::zeros(0, 0) });
    }
    let schur = nalgebra::Schur::try_new(h.clone(), f64::EPSILON, 1000 * n.max(10))
        .ok_or_else(|| Error::NoConvergence(1000 * n.max(10)))?;
    let (q, mut t) = schur.unpack();
    for c in 0..n {
        for r in c + 1..n {
            t[(r, c)] = Complex64::new(0.0, 0.0);
        }
    }
    Ok(SchurDecomposition { q, t })
}

/// Reflects unstable diagonal entries of a triangular factor into the open
/// left half plane (`Re λ → −Re λ`); eigenvalues on the imaginary axis are
/// pushed to a small negative real part. Returns the number of entries
/// changed.
pub fn stabilize_triangular(t: &mut CMatrix) -> usize {
    let n = t.nrows();
    let scale = (0..n).map(|k| t[(k, k)].norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut changed = 0;
    for k in 0..n {
        let z = t[(k, k)];
        if z.re > 0.0 {
            t[(k, k)] = Complex64::new(-z.re, z.im);
            changed += 1;
        } else if z.re == 0.0 {
            t[(k, k)] = Complex64::new(-1e-8 * scale, z.im);
            changed += 1;
        }
    }
    changed
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues in
/// descending order and unit eigenvectors in matching columns.
pub fn dense_eig_hermitian<T>(g: &DMatrix<T>) -> Result<(Vec<f64>, DMatrix<T>)>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n = g.nrows();
    if n != g.ncols() {
        return Err(Error::Dimension(format!("Hermitian eigenproblem of a {}x{} matrix", n, g.ncols())));
    }
    let asym = (g - g.adjoint()).norm();
    let gnorm = g.norm();
    if asym > 1e-10 * gnorm.max(f64::MIN_POSITIVE) {
        return Err(Error::Contract(format!("matrix is not Hermitian (asymmetry {asym:.3e})")));
    }
    let sym = (g + g.adjoint()).map(|v| v * T::from_real(0.5));
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// `λ_max(W*W) = ‖W‖₂²` via the small Gram matrix.
pub fn spectral_norm_sq<T>(w: &DMatrix<T>) -> f64
where
    T: ComplexField<RealField = f64> + Copy,
{
    if w.ncols() == 0 || w.nrows() == 0 {
        return 0.0;
    }
    let gram = w.adjoint() * w;
    gram_max_eigenvalue(&gram)
}

pub fn gram_max_eigenvalue<T>(gram: &DMatrix<T>) -> f64
where
    T: ComplexField<RealField = f64> + Copy,
{
    if gram.nrows() == 1 {
        return gram[(0, 0)].real().max(0.0);
    }
    let sym = (gram + gram.adjoint()).map(|v| v * T::from_real(0.5));
    let eig = SymmetricEigen::new(sym);
    eig.eigenvalues.iter().copied().fold(0.0, f64::max)
}

/// Solves `(T + αI) X = B` for upper-triangular `T` in place of `B`.
/// Returns `false` (leaving `b` partially overwritten) when a shifted
/// diagonal entry is zero to working precision.
pub fn solve_shifted_upper(t: &CMatrix, alpha: Complex64, b: &mut CMatrix) -> bool {
    let n = t.nrows();
    let scale = t.norm().max(alpha.norm()).max(f64::MIN_POSITIVE);
    for k in (0..n).rev() {
        let d = t[(k, k)] + alpha;
        if d.norm() <= 1e-14 * scale {
            return false;
        }
        let inv = d.inv();
        for j in 0..b.ncols() {
            let v = b[(k, j)] * inv;
            b[(k, j)] = v;
            for i in 0..k {
                let tik = t[(i, k)];
                b[(i, j)] -= tik * v;
            }
        }
    }
    true
}

/// Solves `(T* + βI) X = B` for upper-triangular `T` by forward
/// substitution, in place of `B`.
pub fn solve_shifted_adjoint_upper(t: &CMatrix, beta: Complex64, b: &mut CMatrix) -> bool {
    let n = t.nrows();
    let scale = t.norm().max(beta.norm()).max(f64::MIN_POSITIVE);
    for k in 0..n {
        let d = t[(k, k)].conj() + beta;
        if d.norm() <= 1e-14 * scale {
            return false;
        }
        let inv = d.inv();
        for j in 0..b.ncols() {
            let v = b[(k, j)] * inv;
            b[(k, j)] = v;
            for i in k + 1..n {
                let lik = t[(k, i)].conj();
                b[(i, j)] -= lik * v;
            }
        }
    }
    true
}

/// Smallest and largest singular values of a small dense matrix.
pub fn singular_extremes(a: &DMatrix<f64>) -> (f64, f64) {
    if a.ncols() == 0 || a.nrows() == 0 {
        return (0.0, 0.0);
    }
    let sv = a.clone().svd(false, false).singular_values;
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    (min, max)
}

/// Thin QR of a tall real block: `A = Q R`, `Q` with orthonormal columns.
pub fn thin_qr(a: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let qr = nalgebra::QR::<f64, Dyn, Dyn>::new(a.clone());
    (qr.q(), qr.r())
}

/// Largest singular value and its right singular vector.
pub fn dominant_right_singular<T>(a: &DMatrix<T>) -> (f64, nalgebra::DVector<T>)
where
    T: ComplexField<RealField = f64> + Copy,
{
    let gram = a.adjoint() * a;
    let gram = (&gram + gram.adjoint()).map(|v| v * T::from_real(0.5));
    let eig = SymmetricEigen::new(gram);
    let mut best = 0;
    for k in 1..eig.eigenvalues.len() {
        if eig.eigenvalues[k] > eig.eigenvalues[best] {
            best = k;
        }
    }
    (eig.eigenvalues[best].max(0.0).sqrt(), eig.eigenvectors.column(best).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_stable(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let mut h = DMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), 0.0));
        for k in 0..n {
            h[(k, k)] -= c(n as f64, 0.0);
        }
        h
    }

    #[test]
    fn schur_of_diagonal_and_rotation() {
        let s = dense_schur(&to_complex(&DMatrix::from_diagonal(&nalgebra::dvector![-1.0, -2.0]))).unwrap();
        let mut eig: Vec<f64> = s.eigenvalues().iter().map(|z| z.re).collect();
        eig.sort_by(f64::total_cmp);
        assert_eq!(eig, vec![-2.0, -1.0]);

        let rot = to_complex(&DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        let mut eig = dense_schur(&rot).unwrap().eigenvalues();
        eig.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((eig[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((eig[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    /// Eigenvalues of a random matrix annihilate its characteristic
    /// polynomial, evaluated as a scaled determinant.
    #[test]
    fn schur_eigenvalues_are_characteristic_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_stable(8, &mut rng);
        let s = dense_schur(&h).unwrap();
        for lam in s.eigenvalues() {
            let shifted = &h - CMatrix::identity(8, 8) * lam;
            let sv = shifted.svd(false, false).singular_values;
            let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
            assert!(smin < 1e-10 * h.norm(), "sigma_min {smin}");
        }
    }

    #[test]
    fn stabilization_reflects_real_part() {
        let mut t = CMatrix::from_row_slice(2, 2, &[c(2.0, 1.0), c(1.0, 0.0), c(0.0, 0.0), c(-3.0, 0.0)]);
        assert_eq!(stabilize_triangular(&mut t), 1);
        assert_eq!(t[(0, 0)], c(-2.0, 1.0));
        assert_eq!(t[(1, 1)], c(-3.0, 0.0));
    }

    #[test]
    fn hermitian_eig_examples() {
        let (vals, vecs) = dense_eig_hermitian(&DMatrix::from_diagonal(&nalgebra::dvector![1.0f64, 4.0])).unwrap();
        assert_eq!(vals, vec![4.0, 1.0]);
        assert!((vecs[(1, 0)].abs() - 1.0).abs() < 1e-15);

        let w = DMatrix::from_column_slice(2, 1, &[1.0, 1.0]);
        let (vals, _) = dense_eig_hermitian(&(w.transpose() * &w)).unwrap();
        assert!((vals[0] - 2.0).abs() < 1e-15);

        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(dense_eig_hermitian(&bad).is_err());
    }

    #[test]
    fn hermitian_eig_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = CMatrix::from_fn(9, 5, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let g = w.adjoint() * &w;
        let (vals, u) = dense_eig_hermitian(&g).unwrap();
        assert!(vals.windows(2).all(|p| p[0] >= p[1]));
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(5, vals.iter().map(|&v| c(v, 0.0))));
        assert!((&u * d * u.adjoint() - &g).norm() <= 1e-11 * g.norm());
        for k in 0..5 {
            let r = &g * u.column(k) - u.column(k) * c(vals[k], 0.0);
            assert!(r.norm() <= 1e-12 * g.norm() * 10.0);
        }
    }

    #[test]
    fn spectral_norm_examples() {
        let mut w = DMatrix::<f64>::zeros(3, 1);
        w[0] = 1.0;
        assert_eq!(spectral_norm_sq(&w), 1.0);
        let mut w = DMatrix::<f64>::zeros(3, 2);
        w[(0, 0)] = 1.0;
        w[(1, 1)] = 2.0;
        assert!((spectral_norm_sq(&w) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn shifted_triangular_solves() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = dense_schur(&random_stable(6, &mut rng)).unwrap();
        let alpha = c(-0.5, 0.3);
        let b = CMatrix::from_fn(6, 2, |i, j| c(i as f64, j as f64 + 1.0));
        let shifted = &s.t + CMatrix::identity(6, 6) * alpha;
        let mut x = b.clone();
        assert!(solve_shifted_upper(&s.t, alpha, &mut x));
        assert!((&shifted * &x - &b).norm() < 1e-12 * b.norm());
        let mut y = b.clone();
        assert!(solve_shifted_adjoint_upper(&s.t, alpha.conj(), &mut y));
        assert!((shifted.adjoint() * &y - &b).norm() < 1e-12 * b.norm());
        let mut z = b.clone();
        assert!(!solve_shifted_upper(&s.t, -s.t[(2, 2)], &mut z));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn schur_reconstruction_and_unitarity(seed in any::<u64>(), n in 1usize..=32) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_stable(n, &mut rng);
            let s = dense_schur(&h).unwrap();
            let hn = h.norm();
            prop_assert!((&s.q * &s.t * s.q.adjoint() - &h).norm() <= 1e-12 * hn * (n as f64));
            prop_assert!((s.q.adjoint() * &s.q - CMatrix::identity(n, n)).norm() <= 1e-12 * (n as f64));
        }

        #[test]
        fn spectral_norm_matches_svd(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = DMatrix::<f64>::from_fn(100, 3, |_, _| rng.random_range(-1.0..1.0));
            let smax = w.clone().svd(false, false).singular_values.max();
            let got = spectral_norm_sq(&w);
            prop_assert!((got - smax * smax).abs() <= 1e-12 * smax * smax);
        }
    }
}
