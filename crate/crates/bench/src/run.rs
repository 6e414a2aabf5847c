//! Problem assembly, solver runs and their CSV/JSON outputs.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use lradi_core::linalg::matrix_market_read;
use lradi_core::lradi::{lr_adi_solve, LyapunovProblem, SolveReport, TerminationStatus};
use lradi_core::problems::{fem1d_pencil, gen_cd2d, gen_cd3d, gen_rhs};
use serde::Serialize;

use crate::config::{ProblemKind, ProblemSpec, RunConfig};
use crate::error::BenchError;
use crate::strategy::StrategySpec;

pub const CSV_HEADER: &str = "iter,res,shift_re,shift_im,t_shift_cum,t_total_cum";

fn read_matrix(path: &Path) -> Result<lradi_core::linalg::SparseMatrix, BenchError> {
    matrix_market_read(path).map_err(|e| match e {
        lradi_core::Error::Io(source) => BenchError::Read { path: path.into(), source },
        other => BenchError::Config(format!("{}: {other}", path.display())),
    })
}

/// Assembles `A`, the optional `M` and `B` for a problem spec. Random
/// right-hand sides come from [`gen_rhs`] with the spec's seed.
pub fn build_problem(spec: &ProblemSpec) -> Result<LyapunovProblem, BenchError> {
    let n0 = spec.n0.unwrap_or(0);
    let (a, m) = match spec.kind {
        ProblemKind::Cd2d => (gen_cd2d(n0), None),
        ProblemKind::Cd3d => (gen_cd3d(n0), None),
        ProblemKind::Fem1d => {
            let (a, m) = fem1d_pencil(n0);
            (a, Some(m))
        }
        ProblemKind::MatrixMarket => {
            let a = read_matrix(spec.a.as_deref().expect("validated"))?;
            let m = spec.m.as_deref().map(read_matrix).transpose()?;
            (a, m)
        }
    };
    let b = match &spec.b {
        Some(path) => read_matrix(path)?.to_dense(),
        None => gen_rhs(a.nrows(), spec.s, spec.seed),
    };
    LyapunovProblem::new(a, m, b).map_err(BenchError::Problem)
}

/// Result of one strategy on one problem; `error` is set when the solver
/// stopped early, in which case `report` holds the partial history.
#[derive(Debug)]
pub struct RunResult {
    pub strategy: StrategySpec,
    pub report: SolveReport,
    pub error: Option<String>,
}

pub fn execute(problem: &LyapunovProblem, strategy: &StrategySpec) -> RunResult {
    let mut st = strategy.build();
    match lr_adi_solve(problem, st.as_mut()) {
        Ok(sol) => RunResult { strategy: *strategy, report: sol.report, error: None },
        Err(fail) => RunResult { strategy: *strategy, report: fail.report, error: Some(fail.error.to_string()) },
    }
}

/// Per-step history, one row per logical step.
pub fn write_history(report: &SolveReport, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for k in 0..report.iterations {
        let shift = report.shifts[k];
        writeln!(
            out,
            "{},{:.17e},{:.17e},{:.17e},{:.6e},{:.6e}",
            k + 1,
            report.residuals[k + 1],
            shift.re,
            shift.im,
            report.t_shift_cum[k].as_secs_f64(),
            report.t_total_cum[k].as_secs_f64(),
        )?;
    }
    out.flush()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub strategy: String,
    pub problem: String,
    pub iters: usize,
    pub t_total: f64,
    pub t_shift: f64,
    pub final_residual: f64,
    pub status: String,
    pub factorizations: usize,
    pub error: Option<String>,
}

impl Summary {
    pub fn new(problem: &ProblemSpec, result: &RunResult) -> Self {
        let r = &result.report;
        let status = match (&result.error, &r.status) {
            (Some(_), _) | (_, TerminationStatus::Failed(_)) => "failed",
            (None, TerminationStatus::Converged) => "converged",
            (None, TerminationStatus::MaxIterations) => "max-iterations",
        };
        Summary {
            strategy: result.strategy.to_string(),
            problem: problem.describe(),
            iters: r.iterations,
            t_total: r.t_total.as_secs_f64(),
            t_shift: r.t_shift.as_secs_f64(),
            final_residual: r.final_residual(),
            status: status.into(),
            factorizations: r.shift_factorizations,
            error: result.error.clone(),
        }
    }

    /// Equality up to the timing fields.
    pub fn same_outcome(&self, other: &Summary) -> bool {
        let strip = |s: &Summary| Summary { t_total: 0.0, t_shift: 0.0, ..s.clone() };
        strip(self) == strip(other)
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, BenchError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|source| BenchError::Write { path: dir.into(), source })?;
    }
    File::create(path).map(BufWriter::new).map_err(|source| BenchError::Write { path: path.into(), source })
}

/// Paths of the files written by [`run`].
#[derive(Debug, Clone)]
pub struct RunOutputs {
    pub csv: PathBuf,
    pub json: PathBuf,
    pub summary: Summary,
}

fn write_outputs(cfg: &RunConfig, result: &RunResult) -> Result<RunOutputs, BenchError> {
    let stem = cfg.stem();
    let csv = cfg.output.dir.join(format!("{stem}.csv"));
    let json = cfg.output.dir.join(format!("{stem}.json"));
    let mut w = create(&csv)?;
    write_history(&result.report, &mut w).map_err(|source| BenchError::Write { path: csv.clone(), source })?;
    let summary = Summary::new(&cfg.problem, result);
    let mut w = create(&json)?;
    serde_json::to_writer_pretty(&mut w, &summary)
        .map_err(std::io::Error::from)
        .and_then(|_| writeln!(w))
        .and_then(|_| w.flush())
        .map_err(|source| BenchError::Write { path: json.clone(), source })?;
    Ok(RunOutputs { csv, json, summary })
}

fn solve(problem: &LyapunovProblem, cfg: &RunConfig) -> RunResult {
    let problem = problem.clone().with_tol(cfg.tol).with_max_iterations(cfg.max_iter);
    execute(&problem, &cfg.strategy)
}

/// Runs one configuration and writes `<stem>.csv` and `<stem>.json`. A
/// solver failure still writes both files before returning the error.
pub fn run(cfg: &RunConfig) -> Result<RunOutputs, BenchError> {
    let problem = build_problem(&cfg.problem)?;
    let result = solve(&problem, cfg);
    let out = write_outputs(cfg, &result)?;
    match result.error {
        Some(message) => Err(BenchError::Solver { strategy: out.summary.strategy, message }),
        None => Ok(out),
    }
}

/// Runs several strategies sequentially on one problem, generated once.
/// Solver failures become `failed` rows rather than aborting the table.
pub fn compare(cfgs: &[RunConfig]) -> Result<Vec<RunOutputs>, BenchError> {
    let first = cfgs.first().ok_or_else(|| BenchError::Config("compare needs at least one config".into()))?;
    if let Some(other) = cfgs.iter().find(|c| c.problem != first.problem) {
        return Err(BenchError::Config(format!(
            "compare needs one problem, got `{}` and `{}`",
            first.problem.describe(),
            other.problem.describe()
        )));
    }
    let problem = build_problem(&first.problem)?;
    let mut out = Vec::with_capacity(cfgs.len());
    for (k, cfg) in cfgs.iter().enumerate() {
        let result = solve(&problem, cfg);
        let mut named = cfg.clone();
        // Keep outputs of repeated strategies apart.
        if cfgs[..k].iter().any(|c| c.stem() == cfg.stem()) {
            named.output.name = Some(format!("{}-{}", cfg.stem(), k + 1));
        }
        out.push(write_outputs(&named, &result)?);
    }
    Ok(out)
}

pub const TABLE_HEADER: &str = "strategy,iters,t_total,t_shift,res,status";

pub fn write_table_csv(rows: &[Summary], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{TABLE_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "\"{}\",{},{:.3},{:.3},{:.2e},{}",
            r.strategy, r.iters, r.t_total, r.t_shift, r.final_residual, r.status
        )?;
    }
    out.flush()
}

pub fn format_table(rows: &[Summary]) -> String {
    let width = rows.iter().map(|r| r.strategy.chars().count()).max().unwrap_or(0).max("strategy".len());
    let mut s = format!("{:<width$}  {:>5}  {:>9}  {:>9}  {:>9}  status\n", "strategy", "iters", "t_total", "t_shift", "res");
    for r in rows {
        s.push_str(&format!(
            "{:<width$}  {:>5}  {:>9.3}  {:>9.3}  {:>9.2e}  {}\n",
            r.strategy, r.iters, r.t_total, r.t_shift, r.final_residual, r.status
        ));
    }
    s
}
