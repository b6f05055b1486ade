//! Property-based invariants, run through a deterministic proptest runner so
//! the same checks can be driven from a test binary or the acceptance report.

use circprec::circulant::CirculantMatrix;
use circprec::dense::DenseMatrix;
use circprec::dft;
use circprec::krylov::{cg, gmres, minres, SolveOptions};
use circprec::matfunc::{hermitian_eig, HermitianDense};
use circprec::spectrum::cluster_count;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRng, TestRunner};

use crate::common::*;

const CASES: u32 = 64;

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) {
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    if let Err(e) = TestRunner::new_with_rng(config, rng).run(&strategy, test) {
        panic!("{e}");
    }
}

fn complex_vec(len: impl Into<prop::collection::SizeRange>) -> impl Strategy<Value = Vec<C>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| c(a, b)), len)
}

/// `Q diag(values) Q^*` with `Q` unitary, taken from a seeded random Hermitian matrix.
fn with_spectrum(values: &[f64], seed: u64) -> DenseMatrix {
    let h = HermitianDense::new(random_hermitian(&mut rng(seed), values.len())).unwrap();
    let q = hermitian_eig(&h).unwrap().vectors;
    let d = DenseMatrix::from_diagonal(&values.iter().map(|&v| c(v, 0.0)).collect::<Vec<_>>());
    let mut a = q.matmul(&d).unwrap().matmul(&q.adjoint()).unwrap();
    a.symmetrize();
    a
}

pub fn dft_parseval() {
    run(complex_vec(1..80), |x| {
        let lhs = norm(&dft::forward(&x)).powi(2);
        let rhs = x.len() as f64 * norm(&x).powi(2);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
        Ok(())
    });
}

pub fn dft_roundtrip() {
    run(complex_vec(1..130), |x| {
        prop_assert!(max_diff(&dft::inverse(&dft::forward(&x)), &x) < 1e-11);
        Ok(())
    });
}

pub fn dft_linearity() {
    let strategy = (1usize..70).prop_flat_map(|n| (complex_vec(n), complex_vec(n), -3.0..3.0f64, -3.0..3.0f64));
    run(strategy, |(x, y, a, b)| {
        let (a, b) = (c(a, 0.5), c(-0.25, b));
        let combo: Vec<C> = x.iter().zip(&y).map(|(u, v)| a * u + b * v).collect();
        let expected: Vec<C> = dft::forward(&x).iter().zip(dft::forward(&y)).map(|(u, v)| a * u + b * v).collect();
        prop_assert!(max_diff(&dft::forward(&combo), &expected) < 1e-10);
        Ok(())
    });
}

pub fn dft2_is_separable_and_conjugate_dual() {
    run((1usize..12, 1usize..12, any::<u64>()), |(rows, cols, seed)| {
        let x = random_vec(&mut rng(seed), rows * cols);
        let y = dft::forward2(&x, rows, cols);
        // rows first, then columns
        let mut sep: Vec<C> = x.chunks(cols).flat_map(dft::forward).collect();
        for q in 0..cols {
            let col: Vec<C> = (0..rows).map(|r| sep[r * cols + q]).collect();
            for (r, v) in dft::forward(&col).into_iter().enumerate() {
                sep[r * cols + q] = v;
            }
        }
        prop_assert!(max_diff(&y, &sep) < 1e-10);
        let scale = (rows * cols) as f64;
        let conj: Vec<C> = y.iter().map(|v| v.conj()).collect();
        let dual: Vec<C> = dft::forward2(&conj, rows, cols).iter().map(|v| v.conj() / scale).collect();
        prop_assert!(max_diff(&dual, &dft::inverse2(&y, rows, cols)) < 1e-11);
        prop_assert!(max_diff(&dual, &x) < 1e-11);
        Ok(())
    });
}

pub fn minres_and_gmres_residuals_do_not_increase() {
    run((2usize..24, any::<u64>()), |(n, seed)| {
        let a = random_hermitian(&mut rng(seed), n);
        let b = random_vec(&mut rng(seed ^ 1), n);
        let opts = SolveOptions::new(1e-10, Some(2 * n));
        let m = minres(&a, None, &b, &opts).unwrap();
        let g = gmres(&a, None, &b, &opts).unwrap();
        for hist in [&m.report.residual_history, &g.report.residual_history] {
            prop_assert!(hist.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-8) + 1e-14));
        }
        Ok(())
    });
}

pub fn cg_terminates_within_distinct_eigenvalue_count() {
    let strategy = (prop::collection::vec(1.0..4.0f64, 1..6), 1usize..5, any::<u64>());
    run(strategy, |(values, reps, seed)| {
        let mut distinct = values.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup_by(|a, b| (*a - *b).abs() < 0.05);
        let spectrum: Vec<f64> = distinct.iter().flat_map(|&v| std::iter::repeat(v).take(reps)).collect();
        let a = with_spectrum(&spectrum, seed);
        let b = random_vec(&mut rng(seed ^ 2), spectrum.len());
        let sol = cg(&a, None, &b, &SolveOptions::new(1e-8, Some(50))).unwrap();
        prop_assert!(sol.report.converged);
        prop_assert!(sol.report.iterations <= distinct.len(), "{} > {}", sol.report.iterations, distinct.len());
        Ok(())
    });
}

pub fn preconditioned_minres_solves_the_original_system() {
    run((2usize..20, prop::collection::vec(any::<bool>(), 20), any::<u64>()), |(n, signs, seed)| {
        let values: Vec<f64> = (0..n)
            .map(|i| {
                let mag = 0.5 + 2.5 * (i as f64 + 0.5) / n as f64;
                if signs[i] { mag } else { -mag }
            })
            .collect();
        let a = with_spectrum(&values, seed);
        let b = random_vec(&mut rng(seed ^ 3), n);
        let pre_eigs: Vec<C> = (0..n).map(|i| c(0.5 + (i % 3) as f64, 0.0)).collect();
        let pre = CirculantMatrix::from_eigenvalues(pre_eigs).unwrap();
        let sol = minres(&a, Some(&pre), &b, &SolveOptions::new(1e-11, Some(10 * n))).unwrap();
        let rows: Vec<Vec<C>> = (0..n).map(|i| a.row(i).to_vec()).collect();
        let exact = gauss_solve(&rows, &b);
        let diff: Vec<C> = sol.x.iter().zip(&exact).map(|(u, v)| u - v).collect();
        prop_assert!(norm(&diff) <= 1e-8 * norm(&exact));
        Ok(())
    });
}

pub fn abs_of_nonsingular_circulant_is_hpd() {
    run(complex_vec(1..40), |col| {
        let circ = CirculantMatrix::from_first_column(col).unwrap();
        prop_assume!(!circ.is_singular());
        let abs = circ.abs();
        prop_assert!(abs.is_hpd());
        prop_assert!(abs.is_hermitian());
        for (a, e) in abs.eigenvalues().iter().zip(circ.eigenvalues()) {
            prop_assert!((a.re - e.norm()).abs() < 1e-12 * e.norm().max(1.0));
        }
        Ok(())
    });
}

pub fn outlier_count_decreases_with_radius() {
    run((prop::collection::vec(-3.0..3.0f64, 1..60), 0.01..1.0f64, 0.01..1.0f64), |(eigs, e1, e2)| {
        let (small, large) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let at_small = cluster_count(&eigs, small).unwrap();
        let at_large = cluster_count(&eigs, large).unwrap();
        prop_assert!(at_large <= at_small);
        prop_assert!(at_small <= eigs.len());
        Ok(())
    });
}
