//! LR-ADI engine checks against dense oracles.

use lradi_core::linalg::{spectral_norm_sq, SparseMatrix};
use lradi_core::lradi::{
    adi_double_step, adi_real_step, lr_adi_solve, real_structure, run_multistep_group, AdiState, LyapunovProblem,
    Pencil, TerminationStatus,
};
use lradi_core::shifts::{FixedShifts, ShiftContext, ShiftGroup, ShiftStrategy};
use lradi_core::{Complex64, Error, Result};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random matrix shifted so that its spectrum lies in the left half plane.
fn random_stable(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let r = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let norm = r.clone().svd(false, false).singular_values[0];
    r - DMatrix::identity(n, n) * (norm + 0.5)
}

fn random_mass(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let r = DMatrix::from_fn(n, n, |_, _| rng.random_range(-0.3..0.3));
    &r * r.transpose() + DMatrix::identity(n, n)
}

/// Frobenius-free dense residual `A X Mᵀ + M X Aᵀ + B Bᵀ − W Wᵀ`.
fn identity_gap(a: &DMatrix<f64>, m: &DMatrix<f64>, b: &DMatrix<f64>, state: &AdiState) -> f64 {
    let z = state.z().into_owned();
    let x = &z * z.transpose();
    let lyap = a * &x * m.transpose() + m * &x * a.transpose() + b * b.transpose();
    let gap = lyap - &state.w * state.w.transpose();
    spectral_norm_sq(&gap).sqrt()
}

#[test]
fn residual_factorization_identity_with_mixed_shifts() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for inst in 0..6 {
        let n = 20 + 8 * inst;
        let s = 1 + inst % 3;
        let a = random_stable(&mut rng, n);
        let generalized = inst % 2 == 1;
        let m = if generalized { random_mass(&mut rng, n) } else { DMatrix::identity(n, n) };
        let b = DMatrix::from_fn(n, s, |_, _| rng.random_range(0.0..1.0));
        let prob = LyapunovProblem::new(
            SparseMatrix::from_dense(&a),
            generalized.then(|| SparseMatrix::from_dense(&m)),
            b.clone(),
        )
        .unwrap();
        let pencil = Pencil::new(&prob).unwrap();
        let mut fact = pencil.factorizer().unwrap();
        let mut state = AdiState::new(&pencil);
        let bb = spectral_norm_sq(&b);
        let shifts = [c(-1.5, 0.0), c(-2.0, 1.5), c(-0.7, 0.0), c(-3.0, 4.0), c(-1.1, 0.2)];
        for &alpha in &shifts {
            let mut check = |st: &AdiState| {
                let gap = identity_gap(&a, &m, &b, st);
                assert!(gap <= 1e-10 * bb, "instance {inst}: gap {gap:e}");
            };
            run_multistep_group(&mut state, &pencil, &mut fact, alpha, 1, 0.0, 100, &mut check).unwrap();
        }
        assert_eq!(state.iteration(), 8);
    }
}

#[test]
fn double_step_matches_complex_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 25;
    let a = random_stable(&mut rng, n);
    let b = DMatrix::from_fn(n, 2, |_, _| rng.random_range(0.0..1.0));
    let prob = LyapunovProblem::new(SparseMatrix::from_dense(&a), None, b.clone()).unwrap();
    let pencil = Pencil::new(&prob).unwrap();
    let mut fact = pencil.factorizer().unwrap();
    let alpha = c(-1.3, 2.1);
    let mut state = AdiState::new(&pencil);
    let f = fact.factorize(alpha).unwrap();
    adi_double_step(&mut state, &pencil, alpha, &f).unwrap();

    // Plain complex LR-ADI with α and ᾱ.
    let ac = a.map(|x| c(x, 0.0));
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut w = b.map(|x| c(x, 0.0));
    let mut zc = DMatrix::<Complex64>::zeros(n, 0);
    for shift in [alpha, alpha.conj()] {
        let v = (&ac + &id * shift).try_inverse().unwrap() * &w;
        let g2 = -2.0 * shift.re;
        w += &v * c(g2, 0.0);
        let cols = zc.ncols();
        zc = zc.insert_columns(cols, v.ncols(), c(0.0, 0.0));
        zc.columns_mut(cols, v.ncols()).copy_from(&(&v * c(g2.sqrt(), 0.0)));
    }
    let xc = &zc * zc.adjoint();
    let z = state.z().into_owned();
    let xr = (&z * z.transpose()).map(|x| c(x, 0.0));
    assert!((&xc - &xr).norm() <= 1e-12 * xc.norm());
    let wr = state.w.map(|x| c(x, 0.0));
    assert!((&w - &wr).norm() <= 1e-12 * w.norm());
    assert!(w.iter().all(|z| z.im.abs() <= 1e-12 * w.norm()));
}

#[test]
fn sylvester_relations_hold_for_real_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 30;
    let a = random_stable(&mut rng, n);
    let m = random_mass(&mut rng, n);
    let b = DMatrix::from_fn(n, 2, |_, _| rng.random_range(0.0..1.0));
    let prob =
        LyapunovProblem::new(SparseMatrix::from_dense(&a), Some(SparseMatrix::from_dense(&m)), b.clone()).unwrap();
    let pencil = Pencil::new(&prob).unwrap();
    let mut fact = pencil.factorizer().unwrap();
    let mut state = AdiState::new(&pencil);
    for alpha in [c(-2.0, 0.0), c(-1.0, 3.0), c(-0.5, 0.0), c(-4.0, 1.0)] {
        run_multistep_group(&mut state, &pencil, &mut fact, alpha, 1, 0.0, 100, &mut |_| {}).unwrap();
    }
    let (sr, gr) = real_structure(&state.shifts, 2);
    let z = state.z().into_owned();
    let lhs = &a * &z - &m * &z * &sr;
    let rhs = &b * gr.transpose();
    assert!((&lhs - &rhs).norm() <= 1e-10 * rhs.norm());
    let w = &b + &m * &z * &gr;
    assert!((&w - &state.w).norm() <= 1e-10 * w.norm());
    let wm = m.clone().lu().solve(&state.w).unwrap();
    assert!((&wm - state.w_m.as_ref().unwrap()).norm() <= 1e-10 * wm.norm());
}

#[test]
fn exact_shift_converges_in_one_step() {
    let n = 50;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let b = DMatrix::from_fn(n, 3, |_, _| rng.random_range(0.0..1.0));
    let a = SparseMatrix::from_diagonal(&vec![-1.0; n]);
    let prob = LyapunovProblem::new(a, None, b.clone()).unwrap();
    let sol = lr_adi_solve(&prob, &mut FixedShifts::new(vec![c(-1.0, 0.0)])).unwrap();
    assert_eq!(sol.report.iterations, 1);
    assert_eq!(sol.report.status, TerminationStatus::Converged);
    assert!(sol.state.w.norm() <= 1e-12 * b.norm());
    // X = B Bᵀ / 2 solves −2X + B Bᵀ = 0.
    let z = sol.z();
    assert!((&z * z.transpose() - &b * b.transpose() * 0.5).norm() <= 1e-12 * b.norm_squared());
}

#[test]
fn multistep_group_reuses_one_factorization() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 20;
    let a = random_stable(&mut rng, n);
    let b = DMatrix::from_fn(n, 1, |_, _| rng.random_range(0.0..1.0));
    let prob = LyapunovProblem::new(SparseMatrix::from_dense(&a), None, b).unwrap();
    let pencil = Pencil::new(&prob).unwrap();
    let mut fact = pencil.factorizer().unwrap();
    let mut state = AdiState::new(&pencil);
    let done = run_multistep_group(&mut state, &pencil, &mut fact, c(-2.0, 0.0), 5, 0.0, 100, &mut |_| {}).unwrap();
    assert_eq!((done, fact.count()), (5, 1));
    // A complex group of 5 runs five pairs.
    let done = run_multistep_group(&mut state, &pencil, &mut fact, c(-2.0, 1.0), 5, 0.0, 100, &mut |_| {}).unwrap();
    assert_eq!((done, fact.count()), (10, 2));
    // A pair is never started past the iteration limit.
    let done = run_multistep_group(&mut state, &pencil, &mut fact, c(-2.0, 1.0), 2, 0.0, 16, &mut |_| {}).unwrap();
    assert_eq!(done, 0);
    let done = run_multistep_group(&mut state, &pencil, &mut fact, c(-2.0, 1.0), 2, 0.0, 18, &mut |_| {}).unwrap();
    assert_eq!((done, state.iteration()), (2, 17));
    let f = fact.factorize(c(-1.0, 0.0)).unwrap();
    assert!(adi_real_step(&mut state, &pencil, -2.0, &f).is_err());
}

#[test]
fn stopping_test_runs_before_each_step() {
    let n = 10;
    let a = SparseMatrix::from_diagonal(&(1..=n).map(|k| -(k as f64)).collect::<Vec<_>>());
    let b = DMatrix::from_element(n, 1, 1.0);
    let prob = LyapunovProblem::new(a, None, b).unwrap().with_tol(1e-30).with_max_iterations(7);
    let mut shifts = FixedShifts::new((1..=n).map(|k| c(-(k as f64), 0.0)).collect());
    let sol = lr_adi_solve(&prob, &mut shifts).unwrap();
    assert_eq!(sol.report.status, TerminationStatus::MaxIterations);
    assert_eq!(sol.report.iterations, 7);
    assert_eq!(sol.report.residuals.len(), 8);
    assert_eq!(sol.report.t_total_cum.len(), 7);
    // All ten exact shifts annihilate the residual.
    let prob = prob.with_tol(1e-6).with_max_iterations(20);
    let sol = lr_adi_solve(&prob, &mut FixedShifts::new((1..=n).map(|k| c(-(k as f64), 0.0)).collect())).unwrap();
    assert_eq!(sol.report.status, TerminationStatus::Converged);
    assert!(sol.report.iterations <= 10);
    assert!(sol.report.final_residual() < 1e-6);
    // The test precedes each step: no step is taken once below the tolerance.
    let before = &sol.report.residuals[..sol.report.residuals.len() - 1];
    assert!(before.iter().all(|&r| r >= 1e-6));
}

struct Failing;

impl ShiftStrategy for Failing {
    fn name(&self) -> String {
        "failing".into()
    }

    fn next_shifts(&mut self, ctx: &ShiftContext<'_, '_>) -> Result<Vec<ShiftGroup>> {
        if ctx.state.iteration() >= 2 {
            Err(Error::Contract("no more ideas".into()))
        } else {
            Ok(vec![ShiftGroup::single(c(-1.0, 0.0))])
        }
    }
}

#[test]
fn strategy_errors_keep_partial_results() {
    let n = 10;
    let a = SparseMatrix::from_diagonal(&(1..=n).map(|k| -(k as f64)).collect::<Vec<_>>());
    let prob = LyapunovProblem::new(a, None, DMatrix::from_element(n, 1, 1.0)).unwrap();
    let err = lr_adi_solve(&prob, &mut Failing).unwrap_err();
    assert_eq!(err.report.iterations, 2);
    assert!(matches!(err.error, Error::Strategy { step: 3, .. }));
}

#[test]
fn unstable_shifts_are_mirrored() {
    let n = 6;
    let a = SparseMatrix::from_diagonal(&vec![-2.0; n]);
    let prob = LyapunovProblem::new(a, None, DMatrix::from_element(n, 1, 1.0)).unwrap();
    let sol = lr_adi_solve(&prob, &mut FixedShifts::new(vec![c(2.0, 0.0)])).unwrap();
    assert_eq!(sol.report.shifts[0], c(-2.0, 0.0));
    assert_eq!(sol.report.iterations, 1);
}

#[test]
fn singular_shift_is_reported() {
    let n = 6;
    let a = SparseMatrix::from_diagonal(&vec![-2.0; n]);
    let prob = LyapunovProblem::new(a, None, DMatrix::from_element(n, 1, 1.0)).unwrap();
    let pencil = Pencil::new(&prob).unwrap();
    let mut fact = pencil.factorizer().unwrap();
    assert!(matches!(fact.factorize(c(2.0, 0.0)), Err(Error::SingularShift { .. })));
}
