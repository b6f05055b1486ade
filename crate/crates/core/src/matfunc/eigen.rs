//! Dense Hermitian eigensolver.
//!
//! Householder reflections reduce the complex Hermitian input to a Hermitian
//! tridiagonal matrix; a diagonal unitary scaling makes the off-diagonal
//! real, and the implicit-shift QL iteration finishes the real symmetric
//! tridiagonal problem. Everything is deterministic.

use num_complex::Complex64;
use rayon::prelude::*;

use super::HermitianDense;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const PAR_THRESHOLD: usize = 96;

/// Eigenvalues in ascending order and the unitary matrix whose columns are the
/// matching eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

struct Reflector {
    // acts on indices offset.. ; H = I - tau v v^*
    offset: usize,
    tau: f64,
    v: Vec<Complex64>,
}

struct Tridiagonal {
    diag: Vec<f64>,
    // off[k] = T[k+1, k] (complex before phase scaling)
    off: Vec<Complex64>,
    reflectors: Vec<Reflector>,
}

fn tridiagonalize(a: &DenseMatrix) -> Tridiagonal {
    let n = a.dim();
    let mut w = a.clone();
    let mut reflectors = Vec::new();
    let mut off = vec![ZERO; n.saturating_sub(1)];

    for k in 0..n.saturating_sub(2) {
        let start = k + 1;
        let m = n - start;
        let x: Vec<Complex64> = (start..n).map(|i| w.get(i, k)).collect();
        let tail: f64 = x[1..].iter().map(|v| v.norm_sqr()).sum();
        if tail == 0.0 {
            off[k] = x[0];
            continue;
        }
        let xnorm = (x[0].norm_sqr() + tail).sqrt();
        let phase = if x[0] == ZERO { Complex64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let tau = 2.0 / v.iter().map(|z| z.norm_sqr()).sum::<f64>();

        // p = tau * B v on the trailing block
        let data = w.as_mut_slice();
        let row_p = |row: &[Complex64]| -> Complex64 {
            row[start..].iter().zip(&v).fold(ZERO, |acc, (b, vj)| acc + b * vj) * tau
        };
        let p: Vec<Complex64> = if m >= PAR_THRESHOLD {
            data[start * n..].par_chunks_exact(n).map(row_p).collect()
        } else {
            data[start * n..].chunks_exact(n).map(row_p).collect()
        };
        let vp: Complex64 = v.iter().zip(&p).fold(ZERO, |acc, (a, b)| acc + a.conj() * b);
        let half = 0.5 * tau * vp.re;
        let wv: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * half).collect();

        // B -= v w^* + w v^*
        let update = |i: usize, row: &mut [Complex64]| {
            let (vi, wi) = (v[i], wv[i]);
            for ((b, vj), wj) in row[start..].iter_mut().zip(&v).zip(&wv) {
                *b -= vi * wj.conj() + wi * vj.conj();
            }
        };
        if m >= PAR_THRESHOLD {
            data[start * n..].par_chunks_exact_mut(n).enumerate().for_each(|(i, row)| update(i, row));
        } else {
            data[start * n..].chunks_exact_mut(n).enumerate().for_each(|(i, row)| update(i, row));
        }

        w.set(start, k, alpha);
        w.set(k, start, alpha.conj());
        for i in (start + 1)..n {
            w.set(i, k, ZERO);
            w.set(k, i, ZERO);
        }
        off[k] = alpha;
        reflectors.push(Reflector { offset: start, tau, v });
    }
    if n >= 2 {
        off[n - 2] = w.get(n - 1, n - 2);
    }
    let diag = (0..n).map(|i| w.get(i, i).re).collect();
    Tridiagonal { diag, off, reflectors }
}

/// Forms `Q D` where `Q` is the product of the reflectors and `D` is the
/// diagonal phase matrix that makes the tridiagonal real.
fn accumulate_basis(n: usize, reflectors: &[Reflector], phases: &[Complex64]) -> DenseMatrix {
    let mut q = DenseMatrix::identity(n);
    for r in reflectors.iter().rev() {
        let s = r.offset;
        // u_j = sum_i conj(v_i) Q[s+i, j], only columns >= s are touched
        let mut u = vec![ZERO; n - s];
        for (i, vi) in r.v.iter().enumerate() {
            let cv = vi.conj();
            for (uj, qij) in u.iter_mut().zip(&q.row(s + i)[s..]) {
                *uj += cv * qij;
            }
        }
        let data = q.as_mut_slice();
        let update = |i: usize, row: &mut [Complex64]| {
            let f = r.v[i] * r.tau;
            for (qij, uj) in row[s..].iter_mut().zip(&u) {
                *qij -= f * uj;
            }
        };
        if n - s >= PAR_THRESHOLD {
            data[s * n..].par_chunks_exact_mut(n).enumerate().for_each(|(i, row)| update(i, row));
        } else {
            data[s * n..].chunks_exact_mut(n).enumerate().for_each(|(i, row)| update(i, row));
        }
    }
    for row in q.as_mut_slice().chunks_exact_mut(n.max(1)) {
        for (x, d) in row.iter_mut().zip(phases) {
            *x *= d;
        }
    }
    q
}

fn real_tridiagonal(t: &Tridiagonal) -> (Vec<f64>, Vec<f64>, Vec<Complex64>) {
    let n = t.diag.len();
    let mut phases = vec![Complex64::new(1.0, 0.0); n];
    let mut e = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let z = t.off[k];
        let mag = z.norm();
        e[k] = mag;
        phases[k + 1] = if mag > 0.0 { phases[k] * (z / mag) } else { phases[k] };
    }
    (t.diag.clone(), e, phases)
}

/// Implicit-shift QL on the symmetric tridiagonal `(d, e)` where `e[k]` is the
/// `(k+1, k)` entry and `e[n-1] = 0`. When `zt` is given, its rows are rotated
/// so that on exit row `i` holds the `i`-th eigenvector.
fn tql(d: &mut [f64], e: &mut [f64], mut zt: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let max_sweeps = 30 * n;
    let mut sweeps = 0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    e[n - 1] = 0.0;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            loop {
                sweeps += 1;
                if sweeps > max_sweeps {
                    return Err(Error::NoConvergence { sweeps: max_sweeps });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                let el1 = e[l + 1];
                let (mut s, mut s2) = (0.0, 0.0);
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = zt.as_deref_mut() {
                        let (lo, hi) = z.split_at_mut((i + 1) * n);
                        let zi = &mut lo[i * n..];
                        let zi1 = &mut hi[..n];
                        for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                            let hb = *b;
                            *b = s * *a + c * hb;
                            *a = c * *a - s * hb;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

fn ascending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    idx
}

/// Full eigendecomposition `A = V diag(values) V^*`.
pub fn hermitian_eig(a: &HermitianDense) -> Result<EigenDecomposition> {
    let m = a.matrix();
    let n = m.dim();
    if n == 0 {
        return Err(Error::InvalidArgument("eigendecomposition of an empty matrix".into()));
    }
    let t = tridiagonalize(m);
    let (mut d, mut e, phases) = real_tridiagonal(&t);
    let mut zt = vec![0.0; n * n];
    for i in 0..n {
        zt[i * n + i] = 1.0;
    }
    tql(&mut d, &mut e, Some(&mut zt))?;
    let basis = accumulate_basis(n, &t.reflectors, &phases);

    let order = ascending_order(&d);
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();

    // V[r][c] = sum_k basis[r][k] * Z[k][order[c]] = basis row r . zt row order[c]
    let mut out = vec![ZERO; n * n];
    out.par_chunks_exact_mut(n).enumerate().for_each(|(r, row)| {
        let b = basis.row(r);
        for (c, slot) in row.iter_mut().enumerate() {
            let z = &zt[order[c] * n..(order[c] + 1) * n];
            *slot = b.iter().zip(z).fold(ZERO, |acc, (x, y)| acc + x * y);
        }
    });
    let vectors = DenseMatrix::from_row_major(n, out)?;
    Ok(EigenDecomposition { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: &HermitianDense) -> Result<Vec<f64>> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::InvalidArgument("eigenvalues of an empty matrix".into()));
    }
    let t = tridiagonalize(a.matrix());
    let (mut d, mut e, _) = real_tridiagonal(&t);
    tql(&mut d, &mut e, None)?;
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V diag(weights) V^*`, exactly Hermitian when the weights are real.
    pub fn reconstruct_with(&self, weights: &[f64]) -> DenseMatrix {
        let n = self.dim();
        let v = &self.vectors;
        let scaled: Vec<Complex64> = v
            .as_slice()
            .chunks_exact(n)
            .flat_map(|row| row.iter().zip(weights).map(|(x, w)| x * w))
            .collect();
        let mut out = vec![ZERO; n * n];
        out.par_chunks_exact_mut(n).enumerate().for_each(|(i, row)| {
            let si = &scaled[i * n..(i + 1) * n];
            for (j, slot) in row.iter_mut().enumerate().skip(i) {
                *slot = si.iter().zip(v.row(j)).fold(ZERO, |acc, (a, b)| acc + a * b.conj());
            }
        });
        for i in 0..n {
            out[i * n + i].im = 0.0;
            for j in (i + 1)..n {
                out[j * n + i] = out[i * n + j].conj();
            }
        }
        DenseMatrix::from_row_major(n, out).expect("square buffer")
    }

    /// `||A V - V diag(values)||_F`.
    pub fn residual(&self, a: &DenseMatrix) -> f64 {
        let av = a.matmul(&self.vectors).expect("matching dimensions");
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (av.get(i, j) - self.vectors.get(i, j) * self.values[j]).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// `||V^* V - I||_F`.
    pub fn orthogonality_defect(&self) -> f64 {
        let vv = self.vectors.adjoint().matmul(&self.vectors).expect("square");
        vv.sub(&DenseMatrix::identity(self.dim())).expect("square").frobenius_norm()
    }
}
