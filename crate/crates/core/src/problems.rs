//! Reproducible test problems: finite-difference convection–diffusion
//! operators on the unit square and cube, and random right-hand sides.
//!
//! The grids hold `n0` interior points per dimension with mesh width
//! `h = 1/(n0+1)` and homogeneous Dirichlet boundary conditions. Unknowns
//! are numbered lexicographically with the `x` index running fastest.
//! Diffusion and convection both use second-order central differences,
//! with the convection coefficients evaluated at the grid nodes.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::SparseMatrix;

/// Velocity field `(c_x(x), c_y(y), c_z(z))` multiplying the first
/// derivatives in `Δu − c_x u_x − c_y u_y − c_z u_z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convection {
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
}

impl Convection {
    /// `Δu − 100x u_x − 1000y u_y (− 10z u_z)`.
    pub const DEFAULT: Convection = Convection { cx: 100.0, cy: 1000.0, cz: 10.0 };
    pub const NONE: Convection = Convection { cx: 0.0, cy: 0.0, cz: 0.0 };
}

fn assemble(n0: usize, dims: usize, conv: Convection) -> SparseMatrix {
    assert!(n0 >= 1, "grid needs at least one interior point");
    let h = 1.0 / (n0 as f64 + 1.0);
    let inv_h2 = 1.0 / (h * h);
    let n = n0.pow(dims as u32);
    let coeff = [conv.cx, conv.cy, conv.cz];
    let stride = [1, n0, n0 * n0];
    let mut t = Vec::with_capacity(n * (2 * dims + 1));
    for k in 0..n {
        t.push((k, k, -2.0 * dims as f64 * inv_h2));
        for d in 0..dims {
            let idx = (k / stride[d]) % n0;
            let pos = (idx as f64 + 1.0) * h;
            let c = coeff[d] * pos / (2.0 * h);
            // u_{+} couples with 1/h² − c/(2h), u_{−} with 1/h² + c/(2h).
            if idx + 1 < n0 {
                t.push((k, k + stride[d], inv_h2 - c));
            }
            if idx > 0 {
                t.push((k, k - stride[d], inv_h2 + c));
            }
        }
    }
    SparseMatrix::from_triplets(n, n, &t).expect("stencil indices are in range")
}

/// 2D operator `Δu − 100x u_x − 1000y u_y` on an `n0 × n0` grid.
pub fn gen_cd2d(n0: usize) -> SparseMatrix {
    gen_cd2d_with(n0, Convection::DEFAULT)
}

pub fn gen_cd2d_with(n0: usize, conv: Convection) -> SparseMatrix {
    assemble(n0, 2, conv)
}

/// 3D operator `Δu − 100x u_x − 1000y u_y − 10z u_z` on an `n0³` grid.
pub fn gen_cd3d(n0: usize) -> SparseMatrix {
    gen_cd3d_with(n0, Convection::DEFAULT)
}

pub fn gen_cd3d_with(n0: usize, conv: Convection) -> SparseMatrix {
    assemble(n0, 3, conv)
}

/// `n × s` matrix with i.i.d. entries uniform on `[0, 1)`, drawn column
/// by column from a ChaCha8 stream seeded with `seed`.
pub fn gen_rhs(n: usize, s: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = DMatrix::zeros(n, s);
    for v in b.iter_mut() {
        *v = rng.random::<f64>();
    }
    b
}

/// Linear finite elements on `(0, 1)` with `n` interior nodes: returns the
/// negated stiffness matrix and the mass matrix.
pub fn fem1d_pencil(n: usize) -> (SparseMatrix, SparseMatrix) {
    let h = 1.0 / (n as f64 + 1.0);
    let mut a = Vec::with_capacity(3 * n);
    let mut m = Vec::with_capacity(3 * n);
    for k in 0..n {
        a.push((k, k, -2.0 / h));
        m.push((k, k, 4.0 * h / 6.0));
        if k + 1 < n {
            a.push((k, k + 1, 1.0 / h));
            a.push((k + 1, k, 1.0 / h));
            m.push((k, k + 1, h / 6.0));
            m.push((k + 1, k, h / 6.0));
        }
    }
    (
        SparseMatrix::from_triplets(n, n, &a).expect("in range"),
        SparseMatrix::from_triplets(n, n, &m).expect("in range"),
    )
}
