//! Hermitian matrices and analytic functions of them.
//!
//! `h(A)` is evaluated as `V h(diag) V^*` from the eigendecomposition and then
//! symmetrized. [`taylor_matrix_function`] provides the truncated series
//! together with a computable bound on the truncation error, which serves as
//! an independent cross-check of the spectral route.

mod eigen;
mod scalar;

use num_complex::Complex64;

pub use eigen::{hermitian_eig, hermitian_eigenvalues, EigenDecomposition};
pub use scalar::ScalarFunction;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Dense matrix known to satisfy `||D - D^*||_F <= 1e-12 ||D||_F`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianDense(DenseMatrix);

impl HermitianDense {
    /// Validates the Hermitian property and removes the remaining skew part.
    pub fn new(mut d: DenseMatrix) -> Result<Self> {
        let defect = d.hermitian_defect();
        let scale = d.frobenius_norm();
        if defect > 1e-12 * scale {
            return Err(Error::NotHermitian(format!("||D - D*||_F = {defect:e} with ||D||_F = {scale:e}")));
        }
        d.symmetrize();
        Ok(Self(d))
    }

    pub(crate) fn new_unchecked(d: DenseMatrix) -> Self {
        Self(d)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_inner(self) -> DenseMatrix {
        self.0
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.0.matvec(x)
    }
}

impl EigenDecomposition {
    /// `V h(diag) V^*`, failing on the first eigenvalue outside `h`'s domain.
    pub fn apply_function(&self, h: &ScalarFunction) -> Result<HermitianDense> {
        let weights = self.values.iter().map(|&l| h.eval_real(l)).collect::<Result<Vec<f64>>>()?;
        Ok(HermitianDense(self.reconstruct_with(&weights)))
    }

    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `h(A)` via the eigendecomposition of `A`.
pub fn matrix_function(a: &HermitianDense, h: &ScalarFunction) -> Result<HermitianDense> {
    hermitian_eig(a)?.apply_function(h)
}

/// Degree `K - 1` Taylor partial sum `sum_{k<K} a_k A^k` and an upper bound on
/// `||h(A) - partial||_2`, namely
/// `max_i |lambda_i|^K / K! * max_{t in [0,1]} |h^(K)(t lambda_i)|`.
pub fn taylor_matrix_function(a: &HermitianDense, h: &ScalarFunction, terms: usize) -> Result<(HermitianDense, f64)> {
    if terms == 0 {
        return Err(Error::InvalidArgument("at least one Taylor term is required".into()));
    }
    let values = hermitian_eigenvalues(a)?;
    let rho = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let r = h.radius();
    if !(rho < r) {
        return Err(Error::OutsideDomain { function: h.to_string(), value: rho.into(), radius: r });
    }

    let n = a.dim();
    let m = a.matrix();
    // Horner: P = a_{K-1}; P = P A + a_k I
    let mut p = DenseMatrix::identity(n).scale(h.taylor_coefficient(terms - 1).into());
    for k in (0..terms - 1).rev() {
        p = p.matmul(m)?.add(&DenseMatrix::identity(n).scale(h.taylor_coefficient(k).into()))?;
    }
    p.symmetrize();

    let bound = values
        .iter()
        .map(|&l| {
            let scale = (1..=terms).fold(1.0, |acc, j| acc * l.abs() / j as f64);
            scale * h.derivative_bound_on_segment(terms, l)
        })
        .fold(0.0, f64::max);
    Ok((HermitianDense(p), bound))
}
