//! Subspace compression, recycling and the residual-minimizing strategy.

use lradi_core::linalg::{spectral_norm_sq, SparseMatrix};
use lradi_core::lradi::{run_multistep_group, AdiState, LyapunovProblem, Pencil};
use lradi_core::resmin::{
    compress_zh, eval_objective, recycle_krylov, CompressedObjective, KrylovSeed, Method, ResminConfig,
    ResminStrategy, Subspace,
};
use lradi_core::shifts::hamiltonian_residual_shift;
use lradi_core::shifts::ritz::RitzData;
use lradi_core::Complex64;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn tridiag(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            -2.0 - (i as f64) / n as f64
        } else if j == i + 1 {
            0.9
        } else if i == j + 1 {
            -0.6
        } else {
            0.0
        }
    })
}

fn problem(a: &DMatrix<f64>, m: Option<&DMatrix<f64>>, s: usize, seed: u64) -> LyapunovProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = DMatrix::from_fn(a.nrows(), s, |_, _| rng.random_range(0.0..1.0));
    LyapunovProblem::new(SparseMatrix::from_dense(a), m.map(SparseMatrix::from_dense), b).unwrap()
}

/// Largest sine of the principal angles between `span(direct)` and its
/// projection onto `span(q)`.
fn containment_gap(q: &DMatrix<f64>, direct: &DMatrix<f64>) -> f64 {
    let res = direct - q * (q.transpose() * direct);
    res.clone().svd(false, false).singular_values.max()
}

#[test]
fn seed_satisfies_arnoldi_relation() {
    let n = 60;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = DMatrix::from_fn(n, n, |i, j| rng.random_range(-0.5..0.5) - if i == j { 4.0 } else { 0.0 });
    let prob = problem(&a, None, 2, 2);
    let pencil = Pencil::new(&prob).unwrap();
    let seed = KrylovSeed::build(&pencil, 2, 1, None).unwrap();
    assert!((&a * &seed.q - &seed.p_b).norm() <= 1e-12 * a.norm());
    // A Q − Q H is orthogonal to Q.
    let res = &seed.p_b - &seed.q * &seed.h_b;
    assert!((seed.q.transpose() * res).norm() <= 1e-10 * a.norm());
}

#[test]
fn small_seed_spans_everything() {
    let a = DMatrix::from_diagonal(&nalgebra::dvector![-1.0, -2.0]);
    let prob = LyapunovProblem::new(
        SparseMatrix::from_dense(&a),
        None,
        DMatrix::from_column_slice(2, 1, &[0.5f64.sqrt(), 0.5f64.sqrt()]),
    )
    .unwrap();
    let pencil = Pencil::new(&prob).unwrap();
    let seed = KrylovSeed::build(&pencil, 2, 0, None).unwrap();
    let mut ev: Vec<f64> = seed.h_b.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    assert!((ev[0] + 2.0).abs() < 1e-12 && (ev[1] + 1.0).abs() < 1e-12);
}

fn run_history(prob: &LyapunovProblem, shifts: &[Complex64], mut each: impl FnMut(&Pencil<'_>, &AdiState)) {
    let pencil = Pencil::new(prob).unwrap();
    let mut fact = pencil.factorizer().unwrap();
    let mut state = AdiState::new(&pencil);
    for &alpha in shifts {
        run_multistep_group(&mut state, &pencil, &mut fact, alpha, 1, 0.0, 100, &mut |_| {}).unwrap();
        each(&pencil, &state);
    }
}

#[test]
fn recycled_space_contains_direct_extended_krylov_space() {
    let shifts = [c(-1.0, 0.0), c(-3.0, 0.0), c(-2.0, 1.0), c(-0.8, 0.0), c(-2.5, 2.0), c(-1.7, 0.0)];
    for (n, s) in [(40, 1), (40, 2)] {
        let a = tridiag(n);
        let prob = problem(&a, None, s, 3);
        for (p, m) in [(2, 1), (1, 1), (2, 0)] {
            let pencil = Pencil::new(&prob).unwrap();
            let seed = KrylovSeed::build(&pencil, p, m, None).unwrap();
            run_history(&prob, &shifts, |pencil, state| {
                let rec = recycle_krylov(&seed, state, pencil, p, m).unwrap();
                let direct = KrylovSeed::build_for(pencil, &state.w, p, m, None).unwrap();
                let gap = containment_gap(&rec.q, &direct.q);
                assert!(gap <= 1e-8, "n={n} s={s} p={p} m={m} j={}: {gap:e}", state.iteration());
                let explicit = rec.q.transpose() * &a * &rec.q;
                assert!((&rec.h - explicit).norm() <= 1e-9 * a.norm(), "restriction mismatch");
            });
        }
    }
}

#[test]
fn recycled_space_first_step_membership() {
    let a = tridiag(30);
    let prob = problem(&a, None, 1, 4);
    let pencil = Pencil::new(&prob).unwrap();
    let seed = KrylovSeed::build(&pencil, 1, 0, None).unwrap();
    run_history(&prob, &[c(-2.0, 0.0)], |pencil, state| {
        let rec = recycle_krylov(&seed, state, pencil, 1, 0).unwrap();
        let res = &state.w - &rec.q * (rec.q.transpose() * &state.w);
        assert!(res.norm() <= 1e-10 * state.w.norm());
    });
}

#[test]
fn generalized_recycling_matches_explicit_restriction() {
    let n = 30;
    let a = tridiag(n);
    let m = DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => 4.0 / 6.0,
        1 => 1.0 / 6.0,
        _ => 0.0,
    });
    let prob = problem(&a, Some(&m), 1, 5);
    let am = m.clone().lu().solve(&a).unwrap();
    let pencil = Pencil::new(&prob).unwrap();
    let seed = KrylovSeed::build(&pencil, 2, 1, None).unwrap();
    run_history(&prob, &[c(-2.0, 0.0), c(-1.0, 1.0), c(-3.0, 0.0), c(-0.5, 0.0)], |pencil, state| {
        let rec = recycle_krylov(&seed, state, pencil, 2, 1).unwrap();
        let explicit = rec.q.transpose() * &am * &rec.q;
        assert!((&rec.h - explicit).norm() <= 1e-9 * am.norm());
        let direct = KrylovSeed::build_for(pencil, &state.w, 2, 1, None).unwrap();
        assert!(containment_gap(&rec.q, &direct.q) <= 1e-8);
    });
}

#[test]
fn window_objective_matches_explicit_restriction() {
    let n = 20;
    let a = tridiag(n);
    let prob = problem(&a, None, 1, 6);
    let pencil = Pencil::new(&prob).unwrap();
    let mut fact = pencil.factorizer().unwrap();
    let mut state = AdiState::new(&pencil);
    for alpha in [c(-2.0, 0.0), c(-1.0, 0.5), c(-3.0, 0.0)] {
        run_multistep_group(&mut state, &pencil, &mut fact, alpha, 1, 0.0, 100, &mut |_| {}).unwrap();
    }
    let r = compress_zh(&state, &pencil, 4).unwrap();
    let explicit = r.q.transpose() * &a * &r.q;
    assert!((&r.h - &explicit).norm() <= 1e-10 * a.norm());
    let w = r.q.transpose() * &state.w;
    let data = RitzData::from_restriction(r).unwrap();
    let co = CompressedObjective::from_ritz(&data, 1).unwrap();
    let k = explicit.nrows();
    let hc = explicit.map(|x| c(x, 0.0));
    let id = DMatrix::<Complex64>::identity(k, k);
    for alpha in [c(-0.7, 0.0), c(-2.5, 1.0), c(-4.0, 3.0)] {
        let cay = (&hc - &id * alpha.conj()) * (&hc + &id * alpha).try_inverse().unwrap();
        let oracle = spectral_norm_sq(&(cay * w.map(|x| c(x, 0.0))));
        let model = eval_objective(&co, alpha.re, alpha.im);
        assert!((model - oracle).abs() <= 1e-10 * oracle, "model {model:e} oracle {oracle:e}");
    }
}

#[test]
fn first_shift_for_negative_identity_is_exact() {
    let n = 12;
    let a = -DMatrix::<f64>::identity(n, n);
    let mut b = DMatrix::zeros(n, 1);
    b[0] = 1.0;
    let prob = LyapunovProblem::new(SparseMatrix::from_dense(&a), None, b).unwrap();
    let pencil = Pencil::new(&prob).unwrap();
    let state = AdiState::new(&pencil);
    for (p, m) in [(1, 1), (2, 1), (1, 2)] {
        for method in [Method::GaussNewton, Method::NewtonTrust] {
            let mut st = ResminStrategy::new(ResminConfig::new(Subspace::ExtendedKrylov { p, m }, method));
            let step = st.compute(&pencil, &state).unwrap();
            assert!((step.shift - c(-1.0, 0.0)).norm() <= 1e-12, "{}", step.shift);
        }
    }
}

#[test]
fn optimized_shift_improves_on_initial_guess_in_exact_objective() {
    let n0 = 8;
    let a = lradi_core::problems::gen_cd2d(n0).to_dense();
    let n = a.nrows();
    let prob = problem(&a, None, 1, 7);
    let exact = |w: &DMatrix<f64>, alpha: Complex64| {
        let ac = a.map(|x| c(x, 0.0));
        let id = DMatrix::<Complex64>::identity(n, n);
        let cay = (&ac - &id * alpha.conj()) * (&ac + &id * alpha).try_inverse().unwrap();
        spectral_norm_sq(&(cay * w.map(|x| c(x, 0.0))))
    };
    run_history(&prob, &[c(-20.0, 0.0), c(-300.0, 100.0), c(-900.0, 0.0)], |pencil, state| {
        let mut st = ResminStrategy::new(ResminConfig::new(Subspace::Window(4), Method::GaussNewton));
        let step = st.compute(pencil, state).unwrap();
        let w = &state.w;
        assert!(exact(w, step.shift) <= exact(w, step.initial) * (1.0 + 1e-9));
        assert!(exact(w, step.shift) <= spectral_norm_sq(w));
        // Same rule through the Hamiltonian helper.
        let data = RitzData::from_restriction(compress_zh(state, pencil, 4).unwrap()).unwrap();
        let h = hamiltonian_residual_shift(&data.schur.t, &data.w_rot);
        assert_eq!(h, step.initial);
    });
}
