use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// `A + shift * M` could not be factorized; the shift is (numerically) an
    /// eigenvalue of the mirrored pencil.
    #[error("singular shift {shift}: {detail}")]
    SingularShift { shift: Complex64, detail: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("eigenvalue iteration did not converge ({0}x{0} matrix)")]
    NoConvergence(usize),

    #[error("contract violation: {0}")]
    Contract(String),

    /// The largest Gram eigenvalue is not simple, so the spectral-norm
    /// objective is not differentiable at the requested point.
    #[error("non-smooth point: leading Gram eigenvalues coalesce (relative gap {gap:.3e})")]
    NonSmooth { gap: f64 },

    #[error("matrix market, line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("shift strategy failed before step {step}: {source}")]
    Strategy {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
