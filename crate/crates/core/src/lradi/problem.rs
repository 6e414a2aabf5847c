//! Problem definition and the operator wrapper shared by engine and
//! strategies.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ShiftedFactorization, ShiftedFactorizer, SparseMatrix};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITERATIONS: usize = 150;

/// `A X M^T + M X A^T + B B^T = 0` with `M = I` when no mass matrix is
/// given.
#[derive(Debug, Clone)]
pub struct LyapunovProblem {
    pub a: SparseMatrix,
    pub m: Option<SparseMatrix>,
    pub b: DMatrix<f64>,
    pub tol: f64,
    pub max_iterations: usize,
}

impl LyapunovProblem {
    pub fn new(a: SparseMatrix, m: Option<SparseMatrix>, b: DMatrix<f64>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!("A is {}x{}", a.nrows(), a.ncols())));
        }
        if let Some(m) = &m {
            if m.nrows() != a.nrows() || m.ncols() != a.ncols() {
                return Err(Error::Dimension(format!(
                    "M is {}x{}, A is {}x{}",
                    m.nrows(),
                    m.ncols(),
                    a.nrows(),
                    a.ncols()
                )));
            }
        }
        if b.nrows() != a.nrows() || b.ncols() == 0 {
            return Err(Error::Dimension(format!("B is {}x{}, A has {} rows", b.nrows(), b.ncols(), a.nrows())));
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract("B has non-finite entries".into()));
        }
        Ok(Self { a, m, b, tol: DEFAULT_TOL, max_iterations: DEFAULT_MAX_ITERATIONS })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn s(&self) -> usize {
        self.b.ncols()
    }

    pub fn is_generalized(&self) -> bool {
        self.m.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::Config(format!("tolerance {} outside (0, 1)", self.tol)));
        }
        Ok(())
    }
}

/// Matrix-free access to `A`, `M` and `M⁻¹` for one problem.
pub struct Pencil<'a> {
    problem: &'a LyapunovProblem,
    mass: Option<ShiftedFactorization>,
}

impl<'a> Pencil<'a> {
    /// Factorizes `M` once when the problem is generalized.
    pub fn new(problem: &'a LyapunovProblem) -> Result<Self> {
        let mass = match &problem.m {
            Some(m) => Some(ShiftedFactorizer::new(m, None)?.factorize(Complex64::new(0.0, 0.0)).map_err(|e| {
                Error::Contract(format!("mass matrix is singular: {e}"))
            })?),
            None => None,
        };
        Ok(Self { problem, mass })
    }

    pub fn problem(&self) -> &'a LyapunovProblem {
        self.problem
    }

    pub fn n(&self) -> usize {
        self.problem.n()
    }

    pub fn is_generalized(&self) -> bool {
        self.mass.is_some()
    }

    pub fn apply_a(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        self.problem.a.mul(x)
    }

    pub fn apply_m(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        match &self.problem.m {
            Some(m) => m.mul(x),
            None => x.clone(),
        }
    }

    pub fn apply_m_complex(&self, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        match &self.problem.m {
            Some(m) => m.mul_complex(x),
            None => x.clone(),
        }
    }

    pub fn solve_m(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        match &self.mass {
            Some(lu) => lu.solve_real(x).expect("mass factorization is real"),
            None => x.clone(),
        }
    }

    /// `M⁻¹ A x`.
    pub fn apply_am(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        self.solve_m(&self.apply_a(x))
    }

    /// A fresh factorizer over the pencil `(A, M)`.
    pub fn factorizer(&self) -> Result<ShiftedFactorizer> {
        ShiftedFactorizer::new(&self.problem.a, self.problem.m.as_ref())
    }
}
