//! Sparse direct factorizations of shifted matrices `A + αM`.
//!
//! Real shifts are factorized in real arithmetic, complex shifts directly in
//! complex arithmetic. The symbolic analysis only depends on the union
//! pattern of `A` and `M`, so [`ShiftedFactorizer`] computes it once and
//! reuses it for every shift.

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::{Lu, SymbolicLu};
use faer::sparse::{SparseColMat, SymbolicSparseColMat};
use faer::{c64, Mat};
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::sparse::SparseMatrix;
use crate::error::{Error, Result};

/// Relative residual above which a probe solve marks the shift as singular.
const PROBE_TOL: f64 = 1e-8;

enum Numeric {
    Real(Lu<usize, f64>),
    Complex(Lu<usize, c64>),
}

/// LU factorization of `A + αM` for one shift `α`.
pub struct ShiftedFactorization {
    shift: Complex64,
    numeric: Numeric,
}

impl std::fmt::Debug for ShiftedFactorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ShiftedFactorization")
            .field("shift", &self.shift)
            .field("complex", &self.is_complex())
            .finish()
    }
}

impl ShiftedFactorization {
    pub fn shift(&self) -> Complex64 {
        self.shift
    }

    /// True when the factorization was built in complex arithmetic.
    pub fn is_complex(&self) -> bool {
        matches!(self.numeric, Numeric::Complex(_))
    }

    /// Solves with a real right-hand side; only valid for real shifts.
    pub fn solve_real(&self, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        match &self.numeric {
            Numeric::Real(lu) => {
                let mut x = Mat::<f64>::from_fn(b.nrows(), b.ncols(), |i, j| b[(i, j)]);
                lu.solve_in_place(x.as_mut());
                Ok(DMatrix::from_fn(b.nrows(), b.ncols(), |i, j| x[(i, j)]))
            }
            Numeric::Complex(_) => Err(Error::Contract(format!(
                "real solve requested from a factorization for complex shift {}",
                self.shift
            ))),
        }
    }

    /// Solves with a complex right-hand side. A real factorization handles
    /// the real and imaginary parts separately.
    pub fn solve_complex(&self, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        match &self.numeric {
            Numeric::Real(lu) => {
                let s = b.ncols();
                let mut x = Mat::<f64>::from_fn(b.nrows(), 2 * s, |i, j| {
                    if j < s {
                        b[(i, j)].re
                    } else {
                        b[(i, j - s)].im
                    }
                });
                lu.solve_in_place(x.as_mut());
                DMatrix::from_fn(b.nrows(), s, |i, j| Complex64::new(x[(i, j)], x[(i, j + s)]))
            }
            Numeric::Complex(lu) => {
                let mut x = Mat::<c64>::from_fn(b.nrows(), b.ncols(), |i, j| {
                    let z = b[(i, j)];
                    c64::new(z.re, z.im)
                });
                lu.solve_in_place(x.as_mut());
                DMatrix::from_fn(b.nrows(), b.ncols(), |i, j| {
                    let z = x[(i, j)];
                    Complex64::new(z.re, z.im)
                })
            }
        }
    }

    pub fn solve_real_rhs(&self, b: &DMatrix<f64>) -> DMatrix<Complex64> {
        match &self.numeric {
            Numeric::Real(_) => self.solve_real(b).expect("real factorization").map(|v| Complex64::new(v, 0.0)),
            Numeric::Complex(_) => self.solve_complex(&b.map(|v| Complex64::new(v, 0.0))),
        }
    }
}

/// Factorizes `A + αM` for arbitrary shifts over a fixed pencil.
///
/// `A` and `M` are merged onto their union pattern so that every shifted
/// matrix shares one symbolic analysis. The number of numeric
/// factorizations performed is counted.
#[derive(Debug, Clone)]
pub struct ShiftedFactorizer {
    n: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    a_vals: Vec<f64>,
    m_vals: Vec<f64>,
    a_norm: f64,
    m_norm: f64,
    symbolic: Option<SymbolicLu<usize>>,
    count: usize,
}

impl ShiftedFactorizer {
    /// `m = None` means the identity.
    pub fn new(a: &SparseMatrix, m: Option<&SparseMatrix>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!("A is {}x{}, expected square", a.nrows(), a.ncols())));
        }
        let n = a.nrows();
        let eye;
        let m = match m {
            Some(m) => {
                if m.nrows() != n || m.ncols() != n {
                    return Err(Error::Dimension(format!("M is {}x{}, A is {n}x{n}", m.nrows(), m.ncols())));
                }
                m
            }
            None => {
                eye = SparseMatrix::identity(n);
                &eye
            }
        };
        let a_union = a.add_scaled(0.0, m)?;
        let m_union = m.add_scaled(0.0, a)?;
        debug_assert_eq!(a_union.row_idx(), m_union.row_idx());
        Ok(Self {
            n,
            col_ptr: a_union.col_ptr().to_vec(),
            row_idx: a_union.row_idx().to_vec(),
            a_vals: a_union.values().to_vec(),
            m_vals: m_union.values().to_vec(),
            a_norm: a.norm_one(),
            m_norm: m.norm_one(),
            symbolic: None,
            count: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of numeric factorizations performed so far.
    pub fn count(&self) -> usize {
        self.count
    }

    fn symbolic_pattern(&self) -> SymbolicSparseColMat<usize> {
        SymbolicSparseColMat::new_checked(self.n, self.n, self.col_ptr.clone(), None, self.row_idx.clone())
    }

    fn symbolic(&mut self, shift: Complex64) -> Result<SymbolicLu<usize>> {
        if self.symbolic.is_none() {
            let pattern = self.symbolic_pattern();
            let sym = SymbolicLu::try_new(pattern.as_ref()).map_err(|e| Error::SingularShift {
                shift,
                detail: format!("symbolic analysis failed: {e:?}"),
            })?;
            self.symbolic = Some(sym);
        }
        Ok(self.symbolic.clone().unwrap())
    }

    /// Factorizes `A + shift·M`. Exactly singular or numerically breaking
    /// factorizations are reported as [`Error::SingularShift`].
    pub fn factorize(&mut self, shift: Complex64) -> Result<ShiftedFactorization> {
        if !shift.re.is_finite() || !shift.im.is_finite() {
            return Err(Error::Contract(format!("non-finite shift {shift}")));
        }
        let sym = self.symbolic(shift)?;
        self.count += 1;
        let numeric = if shift.im == 0.0 {
            let vals: Vec<f64> = self.a_vals.iter().zip(&self.m_vals).map(|(a, m)| a + shift.re * m).collect();
            let mat = SparseColMat::new(self.symbolic_pattern(), vals);
            let lu = Lu::try_new_with_symbolic(sym, mat.as_ref()).map_err(|e| Error::SingularShift {
                shift,
                detail: format!("numeric factorization failed: {e:?}"),
            })?;
            Numeric::Real(lu)
        } else {
            let vals: Vec<c64> = self
                .a_vals
                .iter()
                .zip(&self.m_vals)
                .map(|(a, m)| c64::new(a + shift.re * m, shift.im * m))
                .collect();
            let mat = SparseColMat::new(self.symbolic_pattern(), vals);
            let lu = Lu::try_new_with_symbolic(sym, mat.as_ref()).map_err(|e| Error::SingularShift {
                shift,
                detail: format!("numeric factorization failed: {e:?}"),
            })?;
            Numeric::Complex(lu)
        };
        let fact = ShiftedFactorization { shift, numeric };
        self.probe(&fact)?;
        Ok(fact)
    }

    /// `(A + shift·M) x` on the union pattern.
    pub fn apply_shifted(&self, shift: Complex64, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut y = DMatrix::zeros(self.n, x.ncols());
        for j in 0..x.ncols() {
            for c in 0..self.n {
                let xc = x[(c, j)];
                for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                    let v = self.a_vals[k] + shift * self.m_vals[k];
                    y[(self.row_idx[k], j)] += v * xc;
                }
            }
        }
        y
    }

    /// LU with partial pivoting does not flag zero pivots; a single probe
    /// solve with a fixed right-hand side catches infinities and garbage.
    fn probe(&self, fact: &ShiftedFactorization) -> Result<()> {
        let b = DMatrix::from_fn(self.n, 1, |i, _| Complex64::new(1.0 + ((i * 7919) % 13) as f64 / 13.0, 0.0));
        let x = fact.solve_complex(&b);
        let shift = fact.shift;
        if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::SingularShift { shift, detail: "zero pivot encountered".into() });
        }
        let r = self.apply_shifted(shift, &x) - &b;
        let r_max = r.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let x_max = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let b_max = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let scale = (self.a_norm + shift.norm() * self.m_norm) * x_max + b_max;
        if r_max > PROBE_TOL * scale * (self.n as f64).sqrt().max(1.0) {
            return Err(Error::SingularShift {
                shift,
                detail: format!("probe residual {r_max:.3e} exceeds tolerance"),
            });
        }
        Ok(())
    }
}

/// One-off factorization of `A + αM` (`M = I` when absent).
pub fn sparse_shifted_factorize(
    a: &SparseMatrix,
    m: Option<&SparseMatrix>,
    shift: Complex64,
) -> Result<ShiftedFactorization> {
    ShiftedFactorizer::new(a, m)?.factorize(shift)
}
