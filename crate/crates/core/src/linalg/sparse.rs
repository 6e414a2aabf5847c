//! Compressed sparse column storage for the large coefficient matrices.

use nalgebra::{DMatrix, DMatrixView};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Real sparse matrix in compressed-column layout.
///
/// Column pointers are nondecreasing, row indices are strictly increasing
/// within each column and every stored value is finite. Explicit zeros are
/// allowed; they keep the pattern of shifted matrices stable.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from raw CSC arrays, validating every invariant.
    pub fn try_from_csc(
        nrows: usize,
        ncols: usize,
        col_ptr: Vec<usize>,
        row_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if col_ptr.len() != ncols + 1 || col_ptr[0] != 0 {
            return Err(Error::Contract("column pointer array malformed".into()));
        }
        if *col_ptr.last().unwrap() != row_idx.len() || row_idx.len() != values.len() {
            return Err(Error::Contract("index/value arrays inconsistent with column pointers".into()));
        }
        for c in 0..ncols {
            let (lo, hi) = (col_ptr[c], col_ptr[c + 1]);
            if hi < lo {
                return Err(Error::Contract(format!("column pointers decrease at column {c}")));
            }
            for k in lo..hi {
                if row_idx[k] >= nrows {
                    return Err(Error::Contract(format!("row index {} out of range", row_idx[k])));
                }
                if k > lo && row_idx[k] <= row_idx[k - 1] {
                    return Err(Error::Contract(format!("row indices not strictly increasing in column {c}")));
                }
            }
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Contract(format!("non-finite entry {v}")));
        }
        Ok(Self { nrows, ncols, col_ptr, row_idx, values })
    }

    /// Assembles from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut counts = vec![0usize; ncols + 1];
        for &(r, c, v) in triplets {
            if r >= nrows || c >= ncols {
                return Err(Error::Dimension(format!("entry ({r}, {c}) outside {nrows}x{ncols}")));
            }
            if !v.is_finite() {
                return Err(Error::Contract(format!("non-finite entry at ({r}, {c})")));
            }
            counts[c + 1] += 1;
        }
        for c in 0..ncols {
            counts[c + 1] += counts[c];
        }
        let mut next = counts.clone();
        let mut rows = vec![0usize; triplets.len()];
        let mut vals = vec![0.0; triplets.len()];
        for &(r, c, v) in triplets {
            rows[next[c]] = r;
            vals[next[c]] = v;
            next[c] += 1;
        }

        let mut col_ptr = Vec::with_capacity(ncols + 1);
        let mut row_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        col_ptr.push(0);
        let mut scratch: Vec<(usize, f64)> = Vec::new();
        for c in 0..ncols {
            scratch.clear();
            scratch.extend((counts[c]..counts[c + 1]).map(|k| (rows[k], vals[k])));
            scratch.sort_by_key(|e| e.0);
            for &(r, v) in &scratch {
                if row_idx.len() > col_ptr[c] && *row_idx.last().unwrap() == r {
                    *values.last_mut().unwrap() += v;
                } else {
                    row_idx.push(r);
                    values.push(v);
                }
            }
            col_ptr.push(row_idx.len());
        }
        Ok(Self { nrows, ncols, col_ptr, row_idx, values })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self {
            nrows: n,
            ncols: n,
            col_ptr: (0..=n).collect(),
            row_idx: (0..n).collect(),
            values: diag.to_vec(),
        }
    }

    /// Stores every entry of a dense matrix, zeros included only on the
    /// diagonal.
    pub fn from_dense(a: &DMatrix<f64>) -> Self {
        let mut t = Vec::new();
        for c in 0..a.ncols() {
            for r in 0..a.nrows() {
                if a[(r, c)] != 0.0 || r == c {
                    t.push((r, c, a[(r, c)]));
                }
            }
        }
        Self::from_triplets(a.nrows(), a.ncols(), &t).expect("dense entries are in range")
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn col_ptr(&self) -> &[usize] {
        &self.col_ptr
    }

    pub fn row_idx(&self) -> &[usize] {
        &self.row_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Iterates `(row, col, value)` over stored entries in column order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.ncols).flat_map(move |c| {
            (self.col_ptr[c]..self.col_ptr[c + 1]).map(move |k| (self.row_idx[k], c, self.values[k]))
        })
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let rows = &self.row_idx[self.col_ptr[c]..self.col_ptr[c + 1]];
        match rows.binary_search(&r) {
            Ok(k) => self.values[self.col_ptr[c] + k],
            Err(_) => 0.0,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            d[(r, c)] += v;
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let t: Vec<_> = self.triplets().map(|(r, c, v)| (c, r, v)).collect();
        Self::from_triplets(self.ncols, self.nrows, &t).expect("transposed entries are in range")
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.ncols)
            .map(|c| self.values[self.col_ptr[c]..self.col_ptr[c + 1]].iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && self.triplets().all(|(r, c, v)| self.get(c, r) == v)
    }

    /// `self * x` for a dense block `x`.
    pub fn mul_dense(&self, x: &DMatrixView<'_, f64>) -> DMatrix<f64> {
        assert_eq!(x.nrows(), self.ncols, "sparse product dimension mismatch");
        let mut y = DMatrix::zeros(self.nrows, x.ncols());
        for j in 0..x.ncols() {
            let xj = x.column(j);
            let mut yj = y.column_mut(j);
            for c in 0..self.ncols {
                let xc = xj[c];
                if xc == 0.0 {
                    continue;
                }
                for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                    yj[self.row_idx[k]] += self.values[k] * xc;
                }
            }
        }
        y
    }

    pub fn mul(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        self.mul_dense(&x.as_view())
    }

    pub fn mul_complex(&self, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let re = self.mul(&x.map(|z| z.re));
        let im = self.mul(&x.map(|z| z.im));
        re.zip_map(&im, Complex64::new)
    }

    /// Sparse combination `self + alpha * other`; the result carries the
    /// union pattern, cancelled entries are kept as explicit zeros.
    pub fn add_scaled(&self, alpha: f64, other: &SparseMatrix) -> Result<Self> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::Dimension("sparse sum of differently sized matrices".into()));
        }
        let t: Vec<_> = self
            .triplets()
            .chain(other.triplets().map(|(r, c, v)| (r, c, alpha * v)))
            .collect();
        Self::from_triplets(self.nrows, self.ncols, &t)
    }
}
