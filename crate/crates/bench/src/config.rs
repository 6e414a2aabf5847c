//! Run configuration files (TOML).
//!
//! ```toml
//! [problem]
//! kind = "cd2d"        # cd2d | cd3d | fem1d | matrix-market
//! n0 = 200             # grid points per dimension (fem1d: unknowns)
//! s = 1
//! seed = 0
//! # matrix-market only: a = "A.mtx", optional m = "M.mtx", b = "B.mtx"
//!
//! [solver]
//! strategy = "resmin+Z(8)+gn"
//! tol = 1e-8
//! max_iter = 150
//!
//! [output]
//! dir = "results"
//! name = "cd2d-resmin"  # file stem; derived from the strategy if absent
//! ```
//!
//! Relative paths are resolved against the directory of the config file.

use std::path::{Path, PathBuf};

use lradi_core::lradi::{DEFAULT_MAX_ITERATIONS, DEFAULT_TOL};
use serde::Deserialize;

use crate::error::BenchError;
use crate::strategy::StrategySpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Cd2d,
    Cd3d,
    Fem1d,
    MatrixMarket,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    #[serde(default)]
    pub n0: Option<usize>,
    #[serde(default = "one")]
    pub s: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub a: Option<PathBuf>,
    #[serde(default)]
    pub m: Option<PathBuf>,
    #[serde(default)]
    pub b: Option<PathBuf>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub strategy: String,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_max_iter() -> usize {
    DEFAULT_MAX_ITERATIONS
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default)]
    pub name: Option<String>,
}

fn default_dir() -> PathBuf {
    PathBuf::from(".")
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: default_dir(), name: None }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    problem: ProblemSpec,
    solver: SolverSpec,
    #[serde(default)]
    output: OutputSpec,
}

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub strategy: StrategySpec,
    pub tol: f64,
    pub max_iter: usize,
    pub output: OutputSpec,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub max_iter: Option<usize>,
    pub tol: Option<f64>,
}

impl RunConfig {
    /// Parses and validates a config; `base` anchors relative paths.
    pub fn parse(text: &str, base: &Path) -> Result<Self, BenchError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        let anchor = |p: Option<PathBuf>| p.map(|p| if p.is_relative() { base.join(p) } else { p });
        let mut problem = raw.problem;
        problem.a = anchor(problem.a);
        problem.m = anchor(problem.m);
        problem.b = anchor(problem.b);
        let mut output = raw.output;
        if output.dir.is_relative() {
            output.dir = base.join(&output.dir);
        }
        let cfg = RunConfig {
            problem,
            strategy: raw.solver.strategy.parse()?,
            tol: raw.solver.tol,
            max_iter: raw.solver.max_iter,
            output,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|source| BenchError::Read { path: path.into(), source })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).map_err(|e| match e {
            BenchError::Config(msg) => BenchError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), BenchError> {
        if let Some(dir) = &o.out_dir {
            self.output.dir = dir.clone();
        }
        if let Some(seed) = o.seed {
            self.problem.seed = seed;
        }
        if let Some(max_iter) = o.max_iter {
            self.max_iter = max_iter;
        }
        if let Some(tol) = o.tol {
            self.tol = tol;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let p = &self.problem;
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(BenchError::Config(format!("tol = {} must lie in (0, 1)", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(BenchError::Config("max_iter must be positive".into()));
        }
        if p.s == 0 {
            return Err(BenchError::Config("s must be at least 1".into()));
        }
        match p.kind {
            ProblemKind::MatrixMarket => {
                if p.a.is_none() {
                    return Err(BenchError::Config("matrix-market problems need a path `a`".into()));
                }
                if p.n0.is_some() {
                    return Err(BenchError::Config("n0 does not apply to matrix-market problems".into()));
                }
            }
            _ => {
                match p.n0 {
                    Some(n0) if n0 >= 3 => {}
                    Some(n0) => return Err(BenchError::Config(format!("n0 = {n0} must be at least 3"))),
                    None => return Err(BenchError::Config("built-in problems need n0".into())),
                }
                if p.a.is_some() || p.m.is_some() || p.b.is_some() {
                    return Err(BenchError::Config("matrix paths only apply to matrix-market problems".into()));
                }
            }
        }
        Ok(())
    }

    /// File stem for the per-run CSV and JSON outputs.
    pub fn stem(&self) -> String {
        self.output.name.clone().unwrap_or_else(|| sanitize(&self.strategy.to_string()))
    }
}

fn sanitize(name: &str) -> String {
    let mut out = String::new();
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c);
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

impl ProblemSpec {
    pub fn describe(&self) -> String {
        let n0 = self.n0.unwrap_or(0);
        let core = match self.kind {
            ProblemKind::Cd2d => format!("cd2d({n0})"),
            ProblemKind::Cd3d => format!("cd3d({n0})"),
            ProblemKind::Fem1d => format!("fem1d({n0})"),
            ProblemKind::MatrixMarket => {
                format!("mm({})", self.a.as_deref().map(|p| p.display().to_string()).unwrap_or_default())
            }
        };
        format!("{core}, s={}, seed={}", self.s, self.seed)
    }
}
