//! Preconditioned Krylov solvers: CG, MINRES and full GMRES.
//!
//! All three start from the zero vector. CG and MINRES stop on the true
//! relative residual `||b - A x|| / ||b||`; GMRES stops on the left
//! preconditioned residual `||M^{-1}(b - A x)|| / ||M^{-1} b||` and also
//! records the true one.

mod cg;
mod gmres;
mod minres;
mod report;

use num_complex::Complex64;

pub use cg::cg;
pub use gmres::gmres;
pub use minres::minres;
pub use report::{write_reports_csv, Method, SolveReport, REPORT_CSV_HEADER};

use crate::bttb::{BccbMatrix, BttbMatrix};
use crate::circulant::CirculantMatrix;
use crate::dense::DenseMatrix;
use crate::error::{check_len, Error, Result};
use crate::matfunc::HermitianDense;
use crate::toeplitz::ToeplitzMatrix;

/// A square linear map `x -> A x`.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64>;
}

/// Applies `M^{-1}` for a preconditioner `M`.
pub trait Preconditioner: Sync {
    fn dim(&self) -> usize;
    fn solve(&self, r: &[Complex64]) -> Result<Vec<Complex64>>;
    /// Whether `M` is Hermitian positive definite (required by CG and MINRES).
    fn is_hpd(&self) -> bool;
}

impl LinearOperator for DenseMatrix {
    fn dim(&self) -> usize {
        DenseMatrix::dim(self)
    }
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.matvec_unchecked(x)
    }
}

impl LinearOperator for HermitianDense {
    fn dim(&self) -> usize {
        HermitianDense::dim(self)
    }
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.matrix().matvec_unchecked(x)
    }
}

impl LinearOperator for ToeplitzMatrix {
    fn dim(&self) -> usize {
        ToeplitzMatrix::dim(self)
    }
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.matvec_unchecked(x)
    }
}

impl LinearOperator for CirculantMatrix {
    fn dim(&self) -> usize {
        CirculantMatrix::dim(self)
    }
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.apply_diagonal(x, |e| e)
    }
}

impl Preconditioner for CirculantMatrix {
    fn dim(&self) -> usize {
        CirculantMatrix::dim(self)
    }
    fn solve(&self, r: &[Complex64]) -> Result<Vec<Complex64>> {
        CirculantMatrix::solve(self, r)
    }
    fn is_hpd(&self) -> bool {
        CirculantMatrix::is_hpd(self)
    }
}

impl LinearOperator for BttbMatrix {
    fn dim(&self) -> usize {
        BttbMatrix::dim(self)
    }
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.matvec_unchecked(x)
    }
}

impl LinearOperator for BccbMatrix {
    fn dim(&self) -> usize {
        BccbMatrix::dim(self)
    }
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.apply_diagonal(x, |e| e)
    }
}

impl Preconditioner for BccbMatrix {
    fn dim(&self) -> usize {
        BccbMatrix::dim(self)
    }
    fn solve(&self, r: &[Complex64]) -> Result<Vec<Complex64>> {
        BccbMatrix::solve(self, r)
    }
    fn is_hpd(&self) -> bool {
        BccbMatrix::is_hpd(self)
    }
}

/// `M = diag(d)`.
#[derive(Debug, Clone)]
pub struct DiagonalPreconditioner(pub Vec<f64>);

impl Preconditioner for DiagonalPreconditioner {
    fn dim(&self) -> usize {
        self.0.len()
    }
    fn solve(&self, r: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.0.len(), r.len())?;
        if let Some(&d) = self.0.iter().find(|d| **d == 0.0) {
            return Err(Error::Singular { min_abs: d, max_abs: self.0.iter().fold(0.0, |m, v| m.max(v.abs())) });
        }
        Ok(r.iter().zip(&self.0).map(|(v, d)| v / d).collect())
    }
    fn is_hpd(&self) -> bool {
        self.0.iter().all(|&d| d > 0.0)
    }
}

/// Stopping tolerance and iteration cap. `maxit = None` means `10 n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub maxit: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: 1e-7, maxit: None }
    }
}

impl SolveOptions {
    pub fn new(tol: f64, maxit: Option<usize>) -> Self {
        Self { tol, maxit }
    }

    fn max_iterations(&self, n: usize) -> usize {
        self.maxit.unwrap_or(10 * n)
    }
}

/// Approximate solution together with its run report.
#[derive(Debug, Clone)]
pub struct Solution {
    pub x: Vec<Complex64>,
    pub report: SolveReport,
}

fn check_problem(a: &dyn LinearOperator, m: Option<&dyn Preconditioner>, b: &[Complex64]) -> Result<()> {
    check_len(a.dim(), b.len())?;
    if let Some(m) = m {
        check_len(a.dim(), m.dim())?;
    }
    Ok(())
}

fn precondition(m: Option<&dyn Preconditioner>, r: &[Complex64]) -> Result<Vec<Complex64>> {
    match m {
        Some(m) => m.solve(r),
        None => Ok(r.to_vec()),
    }
}

fn require_hpd(m: Option<&dyn Preconditioner>, method: Method) -> Result<()> {
    match m {
        Some(m) if !m.is_hpd() => {
            Err(Error::NotPositiveDefinite(format!("{method} requires a Hermitian positive definite preconditioner")))
        }
        _ => Ok(()),
    }
}

fn true_residual(a: &dyn LinearOperator, b: &[Complex64], x: &[Complex64]) -> Vec<Complex64> {
    a.apply(x).iter().zip(b).map(|(ax, bi)| bi - ax).collect()
}

pub(crate) fn axpy(alpha: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
