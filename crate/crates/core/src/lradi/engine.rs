//! The LR-ADI loop: real steps, real double steps for conjugate pairs and
//! multistep groups that reuse one factorization.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use log::warn;
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::problem::{LyapunovProblem, Pencil};
use super::state::{scaled_residual, AdiState, ShiftRecord};
use crate::error::{Error, Result};
use crate::linalg::{spectral_norm_sq, ShiftedFactorization, ShiftedFactorizer};
use crate::shifts::{ShiftContext, ShiftGroup, ShiftStrategy};

#[derive(Debug, Clone, PartialEq)]
pub enum TerminationStatus {
    Converged,
    MaxIterations,
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub status: TerminationStatus,
    /// Logical steps executed.
    pub iterations: usize,
    /// Scaled residual before the first and after every logical step.
    pub residuals: Vec<f64>,
    /// Shift of every logical step.
    pub shifts: Vec<Complex64>,
    /// Cumulative shift-generation time after every logical step.
    pub t_shift_cum: Vec<Duration>,
    /// Cumulative wall-clock time after every logical step.
    pub t_total_cum: Vec<Duration>,
    pub t_shift: Duration,
    pub t_total: Duration,
    /// Numeric factorizations of `A + αM` performed by the solver.
    pub shift_factorizations: usize,
}

impl SolveReport {
    pub fn final_residual(&self) -> f64 {
        *self.residuals.last().unwrap_or(&1.0)
    }
}

#[derive(Debug)]
pub struct Solution {
    pub state: AdiState,
    pub report: SolveReport,
}

impl Solution {
    pub fn z(&self) -> DMatrix<f64> {
        self.state.z().into_owned()
    }
}

/// A solve that stopped on an error, with everything computed up to it.
#[derive(Debug)]
pub struct SolveFailure {
    pub error: Error,
    pub report: SolveReport,
}

impl std::fmt::Display for SolveFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "solve failed after {} steps: {}", self.report.iterations, self.error)
    }
}

impl std::error::Error for SolveFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

fn check_shift(alpha: Complex64, fact: &ShiftedFactorization) -> Result<()> {
    if fact.shift() != alpha {
        return Err(Error::Contract(format!(
            "factorization built for {} used with shift {}",
            fact.shift(),
            alpha
        )));
    }
    Ok(())
}

/// One real step `V = (A+αM)⁻¹W`, `W ← W − 2α M V`, `Z ← [Z, γV]`.
pub fn adi_real_step(state: &mut AdiState, pencil: &Pencil<'_>, alpha: f64, fact: &ShiftedFactorization) -> Result<()> {
    let shift = Complex64::new(alpha, 0.0);
    check_shift(shift, fact)?;
    if alpha >= 0.0 {
        return Err(Error::Contract(format!("real step with non-negative shift {alpha}")));
    }
    let v = fact.solve_real(&state.w)?;
    let rec = ShiftRecord::new(shift);
    let g2 = rec.gamma * rec.gamma;
    state.w += pencil.apply_m(&v) * g2;
    if let Some(wm) = state.w_m.as_mut() {
        *wm += &v * g2;
    }
    state.push_columns(&(v * rec.gamma));
    state.shifts.push(rec);
    let r = scaled_residual(state);
    state.residuals.push(r);
    Ok(())
}

/// Two logical steps with `α` and `ᾱ` (`Im α > 0`) in real arithmetic.
///
/// With `V = (A+αM)⁻¹W` and `δ = Re α / Im α`, the pair appends
/// `γ'(Re V + δ Im V)` and `γ'√(δ²+1) Im V` to `Z`, `γ' = 2√(−Re α)`, and
/// updates `W ← W + γ'² M (Re V + δ Im V)`.
pub fn adi_double_step(
    state: &mut AdiState,
    pencil: &Pencil<'_>,
    alpha: Complex64,
    fact: &ShiftedFactorization,
) -> Result<()> {
    check_shift(alpha, fact)?;
    if alpha.im <= 0.0 || alpha.re >= 0.0 {
        return Err(Error::Contract(format!("double step needs Re α < 0 < Im α, got {alpha}")));
    }
    let v = fact.solve_real_rhs(&state.w);
    let rec = ShiftRecord::new(alpha);
    let g2 = rec.gamma * rec.gamma;

    // Intermediate complex residual after the first half.
    let w_half = state.w.map(|x| Complex64::new(x, 0.0)) + pencil.apply_m_complex(&v) * Complex64::new(g2, 0.0);
    let half = state.scaled(spectral_norm_sq(&w_half));

    let delta = alpha.re / alpha.im;
    let gp = 2.0 * (-alpha.re).sqrt();
    let vr = v.map(|z| z.re);
    let vi = v.map(|z| z.im);
    let comb = &vr + &vi * delta;
    state.w += pencil.apply_m(&comb) * (gp * gp);
    if let Some(wm) = state.w_m.as_mut() {
        *wm += &comb * (gp * gp);
    }
    state.push_columns(&(comb * gp));
    state.push_columns(&(vi * (gp * (delta * delta + 1.0).sqrt())));
    state.shifts.push(rec);
    state.shifts.push(ShiftRecord::new(alpha.conj()));
    state.residuals.push(half);
    let r = scaled_residual(state);
    state.residuals.push(r);
    Ok(())
}

/// Applies one shift `g` times with one factorization: `g` real steps, or
/// `g` double steps (`2g` logical steps) for a complex shift, since every
/// application of `α` brings its conjugate along.
///
/// The stopping test runs before every (double) step; a pair is never
/// started when it would exceed `max_iterations`. Returns the number of
/// logical steps performed.
#[allow(clippy::too_many_arguments)]
pub fn run_multistep_group(
    state: &mut AdiState,
    pencil: &Pencil<'_>,
    factorizer: &mut ShiftedFactorizer,
    alpha: Complex64,
    g: usize,
    tol: f64,
    max_iterations: usize,
    on_step: &mut dyn FnMut(&AdiState),
) -> Result<usize> {
    let start = state.iteration();
    let complex = alpha.im != 0.0;
    let fits = |st: &AdiState| {
        let need = if complex { 2 } else { 1 };
        st.iteration() + need <= max_iterations && st.last_residual() >= tol
    };
    if g == 0 || !fits(state) {
        return Ok(0);
    }
    let fact = factorizer.factorize(alpha)?;
    let mut applied = 0;
    while applied < g && fits(state) {
        if complex {
            adi_double_step(state, pencil, alpha, &fact)?;
        } else {
            adi_real_step(state, pencil, alpha.re, &fact)?;
        }
        applied += 1;
        on_step(state);
    }
    Ok(state.iteration() - start)
}

/// Maps strategy output to engine-ready groups: conjugates to `Im ≥ 0`,
/// mirrors unstable shifts and merges adjacent conjugates into one pair.
fn normalize_groups(groups: Vec<ShiftGroup>) -> Vec<ShiftGroup> {
    let mut out: Vec<ShiftGroup> = Vec::with_capacity(groups.len());
    let mut prev_raw: Option<Complex64> = None;
    for grp in groups {
        let mut a = grp.alpha;
        if !a.re.is_finite() || !a.im.is_finite() || grp.steps == 0 {
            warn!("ignoring invalid shift group {a} x{}", grp.steps);
            continue;
        }
        if a.re >= 0.0 {
            warn!("strategy produced unstable shift {a}; mirroring its real part");
            a.re = if a.re == 0.0 { -f64::EPSILON.sqrt() * a.im.abs().max(1.0) } else { -a.re };
        }
        // The partner of a complex pair directly following it is absorbed.
        if let (Some(p), Some(last)) = (prev_raw, out.last()) {
            if a.im != 0.0 && p.im != 0.0 && (a - p.conj()).norm() <= 1e-14 * a.norm() && last.steps == 1 && grp.steps == 1
            {
                prev_raw = None;
                continue;
            }
        }
        prev_raw = Some(a);
        if a.im < 0.0 {
            a = a.conj();
        }
        out.push(ShiftGroup { alpha: a, steps: grp.steps });
    }
    out
}

fn empty_report() -> SolveReport {
    SolveReport {
        status: TerminationStatus::MaxIterations,
        iterations: 0,
        residuals: vec![1.0],
        shifts: Vec::new(),
        t_shift_cum: Vec::new(),
        t_total_cum: Vec::new(),
        t_shift: Duration::ZERO,
        t_total: Duration::ZERO,
        shift_factorizations: 0,
    }
}

/// Runs LR-ADI until `‖W*W‖ < τ‖B*B‖` or `max_iterations` logical steps.
pub fn lr_adi_solve(
    problem: &LyapunovProblem,
    strategy: &mut dyn ShiftStrategy,
) -> std::result::Result<Solution, SolveFailure> {
    let t0 = Instant::now();
    let fail = |error: Error, report: SolveReport| SolveFailure { error, report };
    let mut report = empty_report();
    if let Err(e) = problem.validate() {
        report.status = TerminationStatus::Failed(e.to_string());
        return Err(fail(e, report));
    }
    let (pencil, mut factorizer) = match Pencil::new(problem).and_then(|p| {
        let f = p.factorizer()?;
        Ok((p, f))
    }) {
        Ok(v) => v,
        Err(e) => {
            report.status = TerminationStatus::Failed(e.to_string());
            return Err(fail(e, report));
        }
    };
    let mut state = AdiState::new(&pencil);
    let mut pending: VecDeque<ShiftGroup> = VecDeque::new();
    let mut t_shift = Duration::ZERO;
    let mut outcome: Result<TerminationStatus> = Ok(TerminationStatus::MaxIterations);
    let mut t_shift_cum = Vec::new();
    let mut t_total_cum = Vec::new();

    loop {
        if state.last_residual() < problem.tol {
            outcome = Ok(TerminationStatus::Converged);
            break;
        }
        if state.iteration() >= problem.max_iterations {
            break;
        }
        if pending.is_empty() {
            let ts = Instant::now();
            let groups = {
                let ctx = ShiftContext { pencil: &pencil, state: &state };
                strategy.next_shifts(&ctx)
            };
            t_shift += ts.elapsed();
            match groups {
                Ok(g) => pending.extend(normalize_groups(g)),
                Err(e) => {
                    outcome = Err(Error::Strategy { step: state.iteration() + 1, source: Box::new(e) });
                    break;
                }
            }
            if pending.is_empty() {
                outcome = Err(Error::Strategy {
                    step: state.iteration() + 1,
                    source: Box::new(Error::Contract("strategy returned no shifts".into())),
                });
                break;
            }
        }
        let grp = pending.pop_front().unwrap();
        let mut record = |st: &AdiState| {
            while t_total_cum.len() < st.iteration() {
                t_shift_cum.push(t_shift);
                t_total_cum.push(t0.elapsed());
            }
        };
        match run_multistep_group(
            &mut state,
            &pencil,
            &mut factorizer,
            grp.alpha,
            grp.steps,
            problem.tol,
            problem.max_iterations,
            &mut record,
        ) {
            Ok(0) => {
                // Only a complex pair that would overrun the iteration limit
                // ends up here.
                if state.last_residual() >= problem.tol {
                    break;
                }
            }
            Ok(_) => {}
            Err(e) => {
                outcome = Err(e);
                break;
            }
        }
    }

    report.iterations = state.iteration();
    report.residuals = state.residuals.clone();
    report.shifts = state.shifts.iter().map(|r| r.alpha).collect();
    report.t_shift_cum = t_shift_cum;
    report.t_total_cum = t_total_cum;
    report.t_shift = t_shift;
    report.t_total = t0.elapsed();
    report.shift_factorizations = factorizer.count();
    match outcome {
        Ok(status) => {
            report.status = status;
            Ok(Solution { state, report })
        }
        Err(e) => {
            report.status = TerminationStatus::Failed(e.to_string());
            Err(fail(e, report))
        }
    }
}
