//! Square complex matrices stored row-major.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{check_len, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Dense `n x n` complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_row_major(n: usize, data: Vec<Complex64>) -> Result<Self> {
        check_len(n * n, data.len())?;
        Ok(Self { n, data })
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Builds the matrix whose `j`-th column is `column(j)`.
    pub fn from_columns(n: usize, column: impl Fn(usize) -> Vec<Complex64> + Sync) -> Self {
        let cols: Vec<Vec<Complex64>> = (0..n).into_par_iter().map(&column).collect();
        Self::from_fn(n, |i, j| cols[j][i])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.n, x.len())?;
        Ok(self.matvec_unchecked(x))
    }

    pub(crate) fn matvec_unchecked(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let row_dot = |row: &[Complex64]| row.iter().zip(x).fold(ZERO, |acc, (a, b)| acc + a * b);
        if n >= 128 {
            self.data.par_chunks_exact(n).map(row_dot).collect()
        } else {
            self.data.chunks_exact(n.max(1)).take(n).map(row_dot).collect()
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_len(self.n, other.n)?;
        let n = self.n;
        let mut out = vec![ZERO; n * n];
        out.par_chunks_exact_mut(n.max(1)).enumerate().for_each(|(i, out_row)| {
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        });
        Ok(Self { n, data: out })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_len(self.n, other.n)?;
        Ok(Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_len(self.n, other.n)?;
        Ok(Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `||A - A^*||_F`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * (self.get(i, j) - self.get(j, i).conj()).norm_sqr();
            }
            s += (2.0 * self.get(i, i).im).powi(2);
        }
        s.sqrt()
    }

    /// Replaces the matrix by `(A + A^*) / 2`.
    pub fn symmetrize(&mut self) {
        let n = self.n;
        for i in 0..n {
            let d = self.get(i, i);
            self.set(i, i, Complex64::new(d.re, 0.0));
            for j in (i + 1)..n {
                let v = (self.get(i, j) + self.get(j, i).conj()) * 0.5;
                self.set(i, j, v);
                self.set(j, i, v.conj());
            }
        }
    }

    /// 2-norm estimate by power iteration on `A^* A`.
    pub fn norm2_estimate(&self, steps: usize) -> f64 {
        let n = self.n;
        if n == 0 {
            return 0.0;
        }
        let adj = self.adjoint();
        let mut x: Vec<Complex64> =
            (0..n).map(|i| Complex64::new(1.0 + (i as f64 * 0.618).fract(), 0.0)).collect();
        let mut sigma = 0.0;
        for _ in 0..steps {
            let nx = vec_norm(&x);
            if nx == 0.0 {
                return 0.0;
            }
            x.iter_mut().for_each(|v| *v /= nx);
            let y = self.matvec_unchecked(&x);
            sigma = vec_norm(&y);
            x = adj.matvec_unchecked(&y);
        }
        sigma
    }
}

pub fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// `x^* y`.
pub fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).fold(ZERO, |acc, (a, b)| acc + a.conj() * b)
}
