//! Dense brute-force oracles for the structured algorithms.

use circprec::bttb::{optimal_bccb_preconditioner, BccbMatrix, BttbMatrix};
use circprec::circulant::{
    optimal_preconditioner, optimal_projection_dense, strang_preconditioner, superoptimal_preconditioner,
    CirculantMatrix,
};
use circprec::dense::DenseMatrix;
use circprec::matfunc::{hermitian_eig, hermitian_eigenvalues, matrix_function, taylor_matrix_function, HermitianDense, ScalarFunction};
use circprec::spectrum::preconditioned_spectrum;
use circprec::toeplitz::{builtin_wiener_function, coefficients_from_quadrature, ToeplitzMatrix};
use crate::common::*;
use rand::Rng;

fn random_toeplitz(rng: &mut impl Rng, n: usize) -> ToeplitzMatrix {
    let mut col = random_vec(rng, n);
    col[0] = c(col[0].re + 4.0, 0.0);
    ToeplitzMatrix::hermitian_from_column(&col).unwrap()
}

fn random_bttb(rng: &mut impl Rng, n: usize, m: usize) -> BttbMatrix {
    let table = random_vec(rng, (2 * n - 1) * (2 * m - 1));
    let (ni, mi) = (n as i64, m as i64);
    BttbMatrix::hermitian_from_coefficients(n, m, |j, k| {
        let v = table[((j + ni - 1) * (2 * mi - 1) + k + mi - 1) as usize];
        if j == 0 && k == 0 { c(v.re + 4.0, 0.0) } else { v }
    })
    .unwrap()
}

pub fn optimal_circulant_is_least_squares_solution() {
    let mut rng = rng(1);
    for n in 1..=8 {
        let a = random_toeplitz(&mut rng, n);
        let x = frobenius_least_squares(&circulant_basis(n), a.to_dense().matrix());
        let err = max_diff(optimal_preconditioner(&a).first_column(), &x);
        assert!(err < 1e-12, "n={n}: {err:e}");
    }
    // general, non-Hermitian matrices through the dense projection
    for n in [2, 5, 7] {
        let b = random_matrix(&mut rng, n);
        let x = frobenius_least_squares(&circulant_basis(n), &b);
        assert!(max_diff(optimal_projection_dense(&b).unwrap().first_column(), &x) < 1e-12);
    }
}

pub fn tridiagonal_optimal_example() {
    let col = [c(2.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
    let a = ToeplitzMatrix::hermitian_from_column(&col).unwrap();
    let x = frobenius_least_squares(&circulant_basis(4), a.to_dense().matrix());
    let expected = [c(2.0, 0.0), c(-0.75, 0.0), c(0.0, 0.0), c(-0.75, 0.0)];
    assert!(max_diff(&x, &expected) < 1e-12);
    assert!(max_diff(optimal_preconditioner(&a).first_column(), &expected) < 1e-15);
}

pub fn optimal_bccb_is_least_squares_solution() {
    let mut rng = rng(2);
    for n in 1..=3 {
        for m in 1..=2 {
            let a = random_bttb(&mut rng, n, m);
            let x = frobenius_least_squares(&bccb_basis(n, m), a.to_dense().matrix());
            let err = max_diff(optimal_bccb_preconditioner(&a).first_column(), &x);
            assert!(err < 1e-12, "({n},{m}): {err:e}");
        }
    }
}

pub fn optimal_bccb_beats_perturbations() {
    let mut rng = rng(3);
    for (n, m) in [(2, 3), (4, 4), (6, 6), (5, 2)] {
        let a = random_bttb(&mut rng, n, m);
        let dense = a.to_dense();
        let opt = optimal_bccb_preconditioner(&a);
        let dist = |cm: &DenseMatrix| cm.sub(dense.matrix()).unwrap().frobenius_norm();
        let best = dist(&opt.to_dense());
        for _ in 0..20 {
            let delta: Vec<C> = random_vec(&mut rng, n * m).iter().map(|v| v * 1e-3).collect();
            let col: Vec<C> = opt.first_column().iter().zip(&delta).map(|(a, b)| a + b).collect();
            let other = BccbMatrix::from_first_column(n, m, col).unwrap();
            assert!(dist(&other.to_dense()) >= best);
        }
    }
}

/// `||I - C^{-1} A||_F` evaluated densely.
fn superoptimal_objective(c_inv: &DenseMatrix, a: &DenseMatrix) -> f64 {
    DenseMatrix::identity(a.dim()).sub(&c_inv.matmul(a).unwrap()).unwrap().frobenius_norm()
}

/// Minimizes `||I - X A||_F` over circulant `X`: linear least squares on the
/// basis `P^j A`. Returns the minimizer and the minimum.
fn superoptimal_oracle(a: &DenseMatrix) -> (Vec<C>, f64) {
    let n = a.dim();
    let basis: Vec<DenseMatrix> = circulant_basis(n).iter().map(|p| p.matmul(a).unwrap()).collect();
    let x = frobenius_least_squares(&basis, &DenseMatrix::identity(n));
    let value = DenseMatrix::identity(n).sub(&combine(&basis, &x)).unwrap().frobenius_norm();
    (x, value)
}

pub fn superoptimal_matches_direct_minimization() {
    let mut rng = rng(4);
    let mut cases = vec![ToeplitzMatrix::from_function(&builtin_wiener_function(), 8).unwrap()];
    cases.extend((0..5).map(|_| random_toeplitz(&mut rng, 8)));
    cases.extend((1..8).map(|n| random_toeplitz(&mut rng, n)));
    for a in &cases {
        let dense = a.to_dense().into_inner();
        let t = superoptimal_preconditioner(a).unwrap();
        let t_inv = inverse(&t.to_dense());
        let value = superoptimal_objective(&t_inv, &dense);
        let (x, oracle_value) = superoptimal_oracle(&dense);
        assert!((value - oracle_value).abs() < 1e-6, "n={}: {value} vs {oracle_value}", a.dim());
        // the oracle's minimizer is C^{-1}
        let t_from_oracle = CirculantMatrix::from_first_column(x).unwrap().map_eigenvalues(|e| 1.0 / e);
        assert!(max_diff(t_from_oracle.first_column(), t.first_column()) < 1e-9);
    }
}

pub fn superoptimal_beats_perturbations() {
    let mut rng = rng(5);
    let a = ToeplitzMatrix::from_function(&builtin_wiener_function(), 8).unwrap();
    let dense = a.to_dense().into_inner();
    let t = superoptimal_preconditioner(&a).unwrap();
    let best = superoptimal_objective(&inverse(&t.to_dense()), &dense);
    for _ in 0..50 {
        let col: Vec<C> = t.first_column().iter().zip(random_vec(&mut rng, 8)).map(|(a, d)| a + d * 1e-3).collect();
        let other = CirculantMatrix::from_first_column(col).unwrap();
        assert!(superoptimal_objective(&inverse(&other.to_dense()), &dense) >= best - 1e-12);
    }
}

pub fn abs_circulant_matches_dense_square_root() {
    let mut rng = rng(6);
    for n in [1, 2, 3, 5, 8, 13, 16, 32] {
        let mut col = random_vec(&mut rng, n);
        col[0] += c(1.5, 0.0);
        let circ = CirculantMatrix::from_first_column(col).unwrap();
        if circ.is_singular() {
            continue;
        }
        let d = circ.to_dense();
        let oracle = sqrtm_hpd(&d.adjoint().matmul(&d).unwrap());
        let err = circ.abs().to_dense().sub(&oracle).unwrap().frobenius_norm();
        assert!(err < 1e-9, "n={n}: {err:e}");
        assert!(circ.abs().is_hpd());
    }
}

pub fn fast_products_match_dense() {
    let mut rng = rng(7);
    for n in [1, 2, 3, 7, 16, 33, 100] {
        let a = random_toeplitz(&mut rng, n);
        let x = random_vec(&mut rng, n);
        assert!(max_diff(&a.matvec(&x).unwrap(), &a.to_dense().matvec(&x).unwrap()) < 1e-11);

        let circ = CirculantMatrix::from_first_column(random_vec(&mut rng, n)).unwrap();
        assert!(max_diff(&circ.matvec(&x).unwrap(), &circ.to_dense().matvec(&x).unwrap()) < 1e-11);
    }
    for (n, m) in [(1, 5), (5, 1), (3, 4), (8, 8), (6, 3)] {
        let a = random_bttb(&mut rng, n, m);
        let x = random_vec(&mut rng, n * m);
        assert!(max_diff(&a.matvec(&x).unwrap(), &a.to_dense().matvec(&x).unwrap()) < 1e-11);
        let bc = BccbMatrix::from_first_column(n, m, random_vec(&mut rng, n * m)).unwrap();
        assert!(max_diff(&bc.matvec(&x).unwrap(), &bc.to_dense().matvec(&x).unwrap()) < 1e-11);
    }
}

pub fn strang_cyclic_examples() {
    let col = [2.0, -1.0, 0.0, 0.0, 0.0, 0.0].map(|v| c(v, 0.0));
    let s = strang_preconditioner(&ToeplitzMatrix::hermitian_from_column(&col).unwrap());
    let expected = [2.0, -1.0, 0.0, 0.0, 0.0, -1.0].map(|v| c(v, 0.0));
    assert!(max_diff(s.first_column(), &expected) < 1e-15);

    // builtin f, n = 8: the middle entry averages a_4 and a_{-4}
    let s = strang_preconditioner(&ToeplitzMatrix::from_function(&builtin_wiener_function(), 8).unwrap());
    assert!((s.first_column()[4] - c(5f64.powf(-1.1), 0.0)).norm() < 1e-15);
    assert!(s.is_hermitian());
}

pub fn eigendecomposition_reconstructs_random_matrices() {
    let mut rng = rng(8);
    for trial in 0..100 {
        let n = rng.gen_range(1..=48);
        let scale = 10f64.powf(rng.gen_range(-3.0..3.0));
        let a = random_hermitian(&mut rng, n).scale(c(scale, 0.0));
        let eig = hermitian_eig(&HermitianDense::new(a.clone()).unwrap()).unwrap();
        let v = &eig.vectors;
        let lambda = DenseMatrix::from_diagonal(&eig.values.iter().map(|&l| c(l, 0.0)).collect::<Vec<_>>());
        let recon = v.matmul(&lambda).unwrap().matmul(&v.adjoint()).unwrap();
        let residual = recon.sub(&a).unwrap().frobenius_norm();
        let norm2 = a.norm2_estimate(300).max(f64::MIN_POSITIVE);
        assert!(residual <= 1e-9 * n as f64 * norm2, "trial {trial}, n={n}: {residual:e}");
        let ortho = v.adjoint().matmul(v).unwrap().sub(&DenseMatrix::identity(n)).unwrap().frobenius_norm();
        assert!(ortho < 1e-12 * n as f64 + 1e-13);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }
}

/// Partial sum `sum_{k<K} a_k A^k` by Horner's rule on dense matrices.
fn dense_partial_sum(a: &DenseMatrix, coeffs: &[f64]) -> DenseMatrix {
    let n = a.dim();
    let mut acc = DenseMatrix::zeros(n);
    for &ck in coeffs.iter().rev() {
        acc = acc.matmul(a).unwrap().add(&DenseMatrix::identity(n).scale(c(ck, 0.0))).unwrap();
    }
    acc
}

pub fn taylor_remainder_bound_dominates_error() {
    let mut rng = rng(9);
    for trial in 0..100 {
        let n = rng.gen_range(1..=12);
        let raw = random_hermitian(&mut rng, n);
        let target_radius = rng.gen_range(0.1..4.0);
        let a = raw.scale(c(target_radius / raw.norm2_estimate(200).max(1e-12), 0.0));
        let h = match trial % 5 {
            0 => ScalarFunction::Exp,
            1 => ScalarFunction::Cos,
            2 => ScalarFunction::Sinh,
            3 => ScalarFunction::cubic(),
            _ => {
                // geometric series truncated at 40 terms, radius large enough for the spectrum
                ScalarFunction::Taylor { coeffs: (0..40).map(|k| 4.5f64.powi(-k)).collect(), radius: 4.5 }
            }
        };
        let terms = rng.gen_range(1..=20);
        let hermitian = HermitianDense::new(a.clone()).unwrap();
        let (approx, bound) = taylor_matrix_function(&hermitian, &h, terms).unwrap();

        let coeffs: Vec<f64> = (0..terms).map(|k| h.taylor_coefficient(k)).collect();
        let oracle_partial = dense_partial_sum(&a, &coeffs);
        let scale = oracle_partial.frobenius_norm().max(1.0);
        assert!(approx.matrix().sub(&oracle_partial).unwrap().frobenius_norm() < 1e-10 * scale);

        let exact = match &h {
            ScalarFunction::Polynomial(cs) | ScalarFunction::Taylor { coeffs: cs, .. } => dense_partial_sum(&a, cs),
            _ => matrix_function(&hermitian, &h).unwrap().into_inner(),
        };
        let mut diff = exact.sub(&oracle_partial).unwrap();
        diff.symmetrize();
        let diff = HermitianDense::new(diff).unwrap();
        let err = hermitian_eigenvalues(&diff).unwrap().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(bound >= err * (1.0 - 1e-9) - 1e-12 * exact.frobenius_norm(), "trial {trial}: {h} K={terms} bound {bound:e} < err {err:e}");
    }
}

pub fn preconditioned_spectrum_matches_cholesky_oracle() {
    let mut rng = rng(10);
    for n in [1, 2, 6, 6, 6, 17, 32] {
        let b = random_matrix(&mut rng, n);
        let ha = b.matmul(&b.adjoint()).unwrap().add(&DenseMatrix::identity(n)).unwrap();
        let ha = HermitianDense::new(ha).unwrap();
        let eigs: Vec<C> = (0..n).map(|_| c(rng.gen_range(0.2..5.0), 0.0)).collect();
        let m = CirculantMatrix::from_eigenvalues(eigs).unwrap();
        let fast = preconditioned_spectrum(&ha, Some(&m)).unwrap();

        // L^{-1} hA L^{-*} with M = L L^*
        let l_inv = inverse(&cholesky(&m.to_dense()));
        let mut k = l_inv.matmul(ha.matrix()).unwrap().matmul(&l_inv.adjoint()).unwrap();
        k.symmetrize();
        let oracle = hermitian_eigenvalues(&HermitianDense::new(k).unwrap()).unwrap();
        let err = fast.iter().zip(&oracle).map(|(a, b)| (a - b).abs() / b.abs().max(1.0)).fold(0.0, f64::max);
        assert!(err < 1e-8, "n={n}: {err:e}");
    }
}

pub fn bccb_spectrum_matches_cholesky_oracle() {
    let mut rng = rng(11);
    let (n, m) = (3, 4);
    let b = random_matrix(&mut rng, n * m);
    let ha = HermitianDense::new(b.matmul(&b.adjoint()).unwrap().add(&DenseMatrix::identity(n * m)).unwrap()).unwrap();
    let eigs: Vec<C> = (0..n * m).map(|_| c(rng.gen_range(0.2..5.0), 0.0)).collect();
    let pre = BccbMatrix::from_eigenvalues(n, m, eigs).unwrap();
    let fast = preconditioned_spectrum(&ha, Some(&pre)).unwrap();
    let l_inv = inverse(&cholesky(&pre.to_dense()));
    let mut k = l_inv.matmul(ha.matrix()).unwrap().matmul(&l_inv.adjoint()).unwrap();
    k.symmetrize();
    let oracle = hermitian_eigenvalues(&HermitianDense::new(k).unwrap()).unwrap();
    assert!(fast.iter().zip(&oracle).all(|(a, b)| (a - b).abs() < 1e-8 * b.abs().max(1.0)));
}

pub fn quadrature_matches_closed_form_coefficients() {
    let k_max = 64;
    let truncated = move |x: f64| {
        (0..=k_max).map(|k| 2.0 * ((k as f64 * x).sin() + (k as f64 * x).cos()) / (1.0 + k as f64).powf(1.1)).sum::<f64>()
    };
    let g = coefficients_from_quadrature(truncated, k_max, 1024).unwrap();
    let f = builtin_wiener_function();
    for k in -k_max..=k_max {
        assert!((g.coefficient(k) - f.coefficient(k)).norm() < 1e-8, "k={k}");
    }
    assert!((g.coefficient(0) - c(2.0, 0.0)).norm() < 1e-12);
    assert!((g.coefficient(1) - c(1.0, -1.0) / 2f64.powf(1.1)).norm() < 1e-12);
}

pub fn toeplitz_norm_respects_symbol_bound() {
    let f = builtin_wiener_function();
    let f_max = f.bounds().unwrap().max;
    for n in [16, 128, 512] {
        let a = ToeplitzMatrix::from_function(&f, n).unwrap();
        assert!(a.norm2_estimate(100) <= f_max + 1e-6);
    }
}
