//! Circulant matrices and the circulant preconditioners.
//!
//! A circulant is held in both of its representations: the first column `c`
//! and the eigenvalues `F c` (unnormalized forward transform), so that
//! `C = U_n^* diag(F c) U_n`. Both are computed at construction and never
//! change afterwards.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dense::DenseMatrix;
use crate::dft;
use crate::error::{check_len, Error, Result};
use crate::matfunc::ScalarFunction;
use crate::toeplitz::ToeplitzMatrix;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Relative size below which an eigenvalue counts as zero.
pub const SINGULAR_THRESHOLD: f64 = 1e-14;

/// Tolerance on `|Im(lambda)| / max|lambda|` for calling a circulant Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct CirculantMatrix {
    first_col: Vec<Complex64>,
    eigs: Vec<Complex64>,
}

impl CirculantMatrix {
    pub fn from_first_column(col: Vec<Complex64>) -> Result<Self> {
        if col.is_empty() {
            return Err(Error::InvalidArgument("circulant order must be at least 1".into()));
        }
        let eigs = dft::forward(&col);
        Ok(Self { first_col: col, eigs })
    }

    pub fn from_eigenvalues(eigs: Vec<Complex64>) -> Result<Self> {
        if eigs.is_empty() {
            return Err(Error::InvalidArgument("circulant order must be at least 1".into()));
        }
        let first_col = dft::inverse(&eigs);
        Ok(Self { first_col, eigs })
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1.0.into())
    }

    pub fn scalar(n: usize, alpha: Complex64) -> Self {
        let mut col = vec![ZERO; n.max(1)];
        col[0] = alpha;
        Self { first_col: col, eigs: vec![alpha; n.max(1)] }
    }

    pub fn dim(&self) -> usize {
        self.first_col.len()
    }

    pub fn first_column(&self) -> &[Complex64] {
        &self.first_col
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigs
    }

    fn max_abs_eig(&self) -> f64 {
        self.eigs.iter().fold(0.0, |m, e| m.max(e.norm()))
    }

    pub fn is_hermitian(&self) -> bool {
        let scale = self.max_abs_eig().max(f64::MIN_POSITIVE);
        self.eigs.iter().all(|e| e.im.abs() <= HERMITIAN_TOLERANCE * scale)
    }

    /// Hermitian with every eigenvalue strictly positive.
    pub fn is_hpd(&self) -> bool {
        self.is_hermitian() && self.eigs.iter().all(|e| e.re > 0.0) && !self.is_singular()
    }

    pub fn is_singular(&self) -> bool {
        let max = self.max_abs_eig();
        max == 0.0 || self.eigs.iter().any(|e| e.norm() < SINGULAR_THRESHOLD * max)
    }

    fn singular_error(&self) -> Error {
        let min_abs = self.eigs.iter().fold(f64::INFINITY, |m, e| m.min(e.norm()));
        Error::Singular { min_abs, max_abs: self.max_abs_eig() }
    }

    /// `C x` with one forward and one inverse transform.
    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.dim(), x.len())?;
        Ok(self.apply_diagonal(x, |e| e))
    }

    /// `C^{-1} b` by eigenvalue division.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.dim(), b.len())?;
        if self.is_singular() {
            return Err(self.singular_error());
        }
        Ok(self.apply_diagonal(b, |e| 1.0 / e))
    }

    pub(crate) fn apply_diagonal(&self, x: &[Complex64], f: impl Fn(Complex64) -> Complex64) -> Vec<Complex64> {
        let mut y = dft::forward(x);
        for (v, &e) in y.iter_mut().zip(&self.eigs) {
            *v *= f(e);
        }
        dft::inverse_in_place(&mut y);
        y
    }

    /// The circulant with eigenvalues `f(lambda_k)`.
    pub fn map_eigenvalues(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let eigs: Vec<Complex64> = self.eigs.iter().map(|&e| f(e)).collect();
        Self::from_eigenvalues(eigs).expect("nonempty")
    }

    /// `|C| = (C^* C)^{1/2}`: eigenvalues replaced by their magnitudes.
    pub fn abs(&self) -> Self {
        self.map_eigenvalues(|e| e.norm().into())
    }

    /// `h(C)`, rejecting eigenvalues outside the domain of `h`.
    pub fn apply_function(&self, h: &ScalarFunction) -> Result<Self> {
        let eigs = self.eigs.iter().map(|&e| h.eval(e)).collect::<Result<Vec<_>>>()?;
        Self::from_eigenvalues(eigs)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        DenseMatrix::from_fn(n, |i, j| self.first_col[(i + n - j) % n])
    }
}

/// Strang's preconditioner: copies the central diagonals of `A` and wraps
/// them around. For even `n` the crossover entry is `(a_{n/2} + a_{-n/2}) / 2`.
pub fn strang_preconditioner(a: &ToeplitzMatrix) -> CirculantMatrix {
    let n = a.dim();
    let col = (0..n)
        .map(|k| {
            let (k, n) = (k as i64, n as i64);
            match (2 * k).cmp(&n) {
                std::cmp::Ordering::Less => a.coefficient(k),
                std::cmp::Ordering::Greater => a.coefficient(k - n),
                std::cmp::Ordering::Equal => (a.coefficient(k) + a.coefficient(-k)) * 0.5,
            }
        })
        .collect();
    CirculantMatrix::from_first_column(col).expect("order >= 1")
}

/// T. Chan's optimal preconditioner, the Frobenius-nearest circulant:
/// `c_j = ((n - j) a_j + j a_{j-n}) / n`.
pub fn optimal_preconditioner(a: &ToeplitzMatrix) -> CirculantMatrix {
    let n = a.dim() as i64;
    let col = (0..n)
        .map(|j| (a.coefficient(j) * (n - j) as f64 + a.coefficient(j - n) * j as f64) / n as f64)
        .collect();
    CirculantMatrix::from_first_column(col).expect("order >= 1")
}

/// Frobenius-nearest circulant to an arbitrary square matrix: `c_j` is the
/// mean of the wrapped diagonal `{(r, c) : r - c = j mod n}`.
pub fn optimal_projection_dense(b: &DenseMatrix) -> Result<CirculantMatrix> {
    let n = b.dim();
    if n == 0 {
        return Err(Error::InvalidArgument("projection of an empty matrix".into()));
    }
    let mut col = vec![ZERO; n];
    for r in 0..n {
        for (c, &v) in b.row(r).iter().enumerate() {
            col[(r + n - c) % n] += v;
        }
    }
    col.iter_mut().for_each(|v| *v /= n as f64);
    CirculantMatrix::from_first_column(col)
}

/// Optimal projection of the matrix whose `q`-th column is `column(q)`.
fn project_columns(n: usize, column: impl Fn(usize) -> Vec<Complex64> + Sync) -> CirculantMatrix {
    let partial: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|q| {
            let c = column(q);
            let mut wrapped = vec![ZERO; n];
            for (r, v) in c.into_iter().enumerate() {
                wrapped[(r + n - q) % n] = v;
            }
            wrapped
        })
        .collect();
    let mut col = vec![ZERO; n];
    for p in &partial {
        for (acc, v) in col.iter_mut().zip(p) {
            *acc += v;
        }
    }
    col.iter_mut().for_each(|v| *v /= n as f64);
    CirculantMatrix::from_first_column(col).expect("order >= 1")
}

/// Tyrtyshnikov's superoptimal preconditioner, the minimizer of
/// `||I - C^{-1} A||_F`, computed as `c(A A^*) c(A^*)^{-1}` in eigenvalue space.
///
/// `A` is Hermitian here, so `c(A^*) = c(A)` and the columns of `A A^*` are
/// `A (A e_q)`, each obtained with two fast products.
pub fn superoptimal_preconditioner(a: &ToeplitzMatrix) -> Result<CirculantMatrix> {
    let n = a.dim();
    let c_a = optimal_preconditioner(a);
    if c_a.is_singular() {
        return Err(c_a.singular_error());
    }
    let c_aa = project_columns(n, |q| {
        let mut e = vec![ZERO; n];
        e[q] = 1.0.into();
        a.matvec_unchecked(&a.matvec_unchecked(&e))
    });
    let eigs = c_aa.eigenvalues().iter().zip(c_a.eigenvalues()).map(|(num, den)| num / den).collect();
    CirculantMatrix::from_eigenvalues(eigs)
}
