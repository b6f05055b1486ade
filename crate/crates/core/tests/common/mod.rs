//! Dense reference computations used as independent oracles.
#![allow(dead_code)]

use circprec::dense::DenseMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut impl Rng, n: usize) -> Vec<C> {
    (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    DenseMatrix::from_row_major(n, random_vec(rng, n * n)).unwrap()
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    let b = random_matrix(rng, n);
    b.add(&b.adjoint()).unwrap().scale(c(0.5, 0.0))
}

pub fn max_diff(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn norm(x: &[C]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting; `a` is
/// row-major `n x n`.
pub fn gauss_solve(a: &[Vec<C>], b: &[C]) -> Vec<C> {
    let n = b.len();
    let mut m: Vec<Vec<C>> = a.iter().zip(b).map(|(row, &bi)| {
        let mut r = row.clone();
        r.push(bi);
        r
    }).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm())).unwrap();
        m.swap(col, piv);
        let p = m[col][col];
        assert!(p.norm() > 1e-300, "singular system in oracle");
        for r in col + 1..n {
            let f = m[r][col] / p;
            for k in col..=n {
                let v = m[col][k];
                m[r][k] -= f * v;
            }
        }
    }
    let mut x = vec![C::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let mut s = m[r][n];
        for k in r + 1..n {
            s -= m[r][k] * x[k];
        }
        x[r] = s / m[r][r];
    }
    x
}

pub fn inverse(a: &DenseMatrix) -> DenseMatrix {
    let n = a.dim();
    let rows: Vec<Vec<C>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    DenseMatrix::from_columns(n, |q| {
        let mut e = vec![C::new(0.0, 0.0); n];
        e[q] = C::new(1.0, 0.0);
        gauss_solve(&rows, &e)
    })
}

/// Least squares `min ||sum_i x_i B_i - T||_F` over complex `x`, by the
/// normal equations on the vectorized basis.
pub fn frobenius_least_squares(basis: &[DenseMatrix], target: &DenseMatrix) -> Vec<C> {
    let vec_of = |m: &DenseMatrix| m.as_slice().to_vec();
    let cols: Vec<Vec<C>> = basis.iter().map(vec_of).collect();
    let t = vec_of(target);
    let inner = |u: &[C], v: &[C]| u.iter().zip(v).map(|(a, b)| a.conj() * b).sum::<C>();
    let gram: Vec<Vec<C>> = cols.iter().map(|u| cols.iter().map(|v| inner(u, v)).collect()).collect();
    let rhs: Vec<C> = cols.iter().map(|u| inner(u, &t)).collect();
    gauss_solve(&gram, &rhs)
}

pub fn combine(basis: &[DenseMatrix], x: &[C]) -> DenseMatrix {
    let n = basis[0].dim();
    let mut out = DenseMatrix::zeros(n);
    for (b, &xi) in basis.iter().zip(x) {
        out = out.add(&b.scale(xi)).unwrap();
    }
    out
}

/// The `n` circulant permutation powers `P^j`, `(P^j)_{r,c} = [r - c = j mod n]`.
pub fn circulant_basis(n: usize) -> Vec<DenseMatrix> {
    (0..n)
        .map(|j| DenseMatrix::from_fn(n, |r, col| if (r + n - col) % n == j { c(1.0, 0.0) } else { c(0.0, 0.0) }))
        .collect()
}

/// Kronecker products `P_n^j (x) P_m^k`, ordered with `k` fastest.
pub fn bccb_basis(n: usize, m: usize) -> Vec<DenseMatrix> {
    let mut out = Vec::new();
    for j in 0..n {
        for k in 0..m {
            out.push(DenseMatrix::from_fn(n * m, |row, col| {
                let bj = (row / m + n - col / m) % n == j;
                let bk = (row % m + m - col % m) % m == k;
                if bj && bk { c(1.0, 0.0) } else { c(0.0, 0.0) }
            }));
        }
    }
    out
}

/// Lower-triangular Cholesky factor of an HPD matrix.
pub fn cholesky(a: &DenseMatrix) -> DenseMatrix {
    let n = a.dim();
    let mut l = DenseMatrix::zeros(n);
    for j in 0..n {
        let mut d = a.get(j, j).re;
        for k in 0..j {
            d -= l.get(j, k).norm_sqr();
        }
        assert!(d > 0.0, "matrix is not positive definite");
        let ljj = d.sqrt();
        l.set(j, j, c(ljj, 0.0));
        for i in j + 1..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k).conj();
            }
            l.set(i, j, s / ljj);
        }
    }
    l
}

/// Principal square root of an HPD matrix by the Denman-Beavers iteration.
pub fn sqrtm_hpd(x: &DenseMatrix) -> DenseMatrix {
    let n = x.dim();
    let half = c(0.5, 0.0);
    let (mut y, mut z) = (x.clone(), DenseMatrix::identity(n));
    for _ in 0..100 {
        let y_next = y.add(&inverse(&z)).unwrap().scale(half);
        let z_next = z.add(&inverse(&y)).unwrap().scale(half);
        let change = y_next.sub(&y).unwrap().frobenius_norm();
        y = y_next;
        z = z_next;
        if change <= 1e-15 * y.frobenius_norm() {
            break;
        }
    }
    y
}
