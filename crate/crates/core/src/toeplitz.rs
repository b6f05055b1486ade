//! Generating functions and Hermitian Toeplitz matrices.
//!
//! A Toeplitz matrix of order `n` generated by `f` has entry `(p, q) = a_{p-q}`
//! where `a_k` is the `k`-th Fourier coefficient of `f` on `[-pi, pi]`.
//! Matrix-vector products use a circulant embedding of length
//! `next_pow2(2n - 1)` so the radix-2 transform always applies.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::io::{Read, Write};
use std::sync::Arc;

use num_complex::Complex64;

use crate::dense::{vec_norm, DenseMatrix};
use crate::dft;
use crate::error::{check_len, Error, Result};
use crate::matfunc::HermitianDense;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Exponent of the decay `(1 + k)^{-1.1}` in the built-in test symbol.
const WIENER_DECAY: f64 = 1.1;

/// Grid used to estimate `f_min` / `f_max` of the built-in symbol.
const BOUNDS_GRID: usize = 16384;

/// Range of a real generating function, `f_min <= f(x) <= f_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolBounds {
    pub min: f64,
    pub max: f64,
}

type CoefficientFn = Arc<dyn Fn(i64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum Source {
    Wiener,
    Table(BTreeMap<i64, Complex64>),
    Custom(CoefficientFn),
}

/// Provider of the Fourier coefficients `a_k` of a periodic symbol.
#[derive(Clone)]
pub struct GeneratingFunction1D {
    name: String,
    source: Source,
    hermitian: bool,
    bounds: Option<SymbolBounds>,
}

impl fmt::Debug for GeneratingFunction1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratingFunction1D")
            .field("name", &self.name)
            .field("hermitian", &self.hermitian)
            .field("bounds", &self.bounds)
            .finish()
    }
}

/// The symbol `f(x) = 2 sum_{k>=0} (sin kx + cos kx) / (1 + k)^1.1`.
///
/// Its coefficients are `a_0 = 2`, `a_k = (1 - i) / (1 + k)^1.1` and
/// `a_{-k} = conj(a_k)` for `k >= 1`. The attached bounds are estimated on a
/// 16384-point grid and are meant for diagnostics only.
pub fn builtin_wiener_function() -> GeneratingFunction1D {
    let mut g = GeneratingFunction1D {
        name: "wiener".to_string(),
        source: Source::Wiener,
        hermitian: true,
        bounds: None,
    };
    g.bounds = Some(g.estimate_bounds(BOUNDS_GRID));
    g
}

/// Trapezoidal-rule Fourier coefficients of a real periodic function for
/// `|k| <= k_max`. Coefficients beyond `k_max` are reported as zero.
pub fn coefficients_from_quadrature(
    f: impl Fn(f64) -> f64,
    k_max: i64,
    grid_size: usize,
) -> Result<GeneratingFunction1D> {
    if k_max < 0 {
        return Err(Error::InvalidArgument(format!("k_max must be nonnegative, got {k_max}")));
    }
    if grid_size < (4 * k_max as usize).max(1) {
        return Err(Error::InvalidArgument(format!(
            "grid size {grid_size} is below 4 * k_max = {}",
            4 * k_max
        )));
    }
    let h = 2.0 * PI / grid_size as f64;
    let samples: Vec<(f64, f64)> = (0..grid_size)
        .map(|j| {
            let x = -PI + h * j as f64;
            (x, f(x))
        })
        .collect();
    let mut table = BTreeMap::new();
    for k in 0..=k_max {
        let sum = samples
            .iter()
            .fold(ZERO, |acc, &(x, fx)| acc + Complex64::from_polar(fx, -(k as f64) * x));
        let a = sum / grid_size as f64;
        if k == 0 {
            table.insert(0, Complex64::new(a.re, 0.0));
        } else {
            table.insert(k, a);
            table.insert(-k, a.conj());
        }
    }
    Ok(GeneratingFunction1D {
        name: "quadrature".to_string(),
        source: Source::Table(table),
        hermitian: true,
        bounds: None,
    })
}

impl GeneratingFunction1D {
    /// Wraps an arbitrary coefficient map. `hermitian` declares
    /// `a_{-k} = conj(a_k)`; [`Self::spot_check_hermitian`] verifies it.
    pub fn from_fn(
        name: impl Into<String>,
        hermitian: bool,
        coefficient: impl Fn(i64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), source: Source::Custom(Arc::new(coefficient)), hermitian, bounds: None }
    }

    /// Finitely supported coefficients; every `k` not listed is zero. The
    /// Hermitian flag is set when the table is conjugate-symmetric to 1e-14.
    pub fn from_table(name: impl Into<String>, entries: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let table: BTreeMap<i64, Complex64> = entries.into_iter().collect();
        let hermitian = table.iter().all(|(&k, &a)| {
            let mirror = table.get(&-k).copied().unwrap_or(ZERO);
            (a - mirror.conj()).norm() <= 1e-14 * (1.0 + a.norm())
        });
        Self { name: name.into(), source: Source::Table(table), hermitian, bounds: None }
    }

    pub fn with_bounds(mut self, bounds: SymbolBounds) -> Self {
        self.bounds = Some(bounds);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn bounds(&self) -> Option<SymbolBounds> {
        self.bounds
    }

    pub fn coefficient(&self, k: i64) -> Complex64 {
        match &self.source {
            Source::Wiener => {
                if k == 0 {
                    Complex64::new(2.0, 0.0)
                } else {
                    let mag = (1.0 + k.unsigned_abs() as f64).powf(-WIENER_DECAY);
                    if k > 0 {
                        Complex64::new(mag, -mag)
                    } else {
                        Complex64::new(mag, mag)
                    }
                }
            }
            Source::Table(t) => t.get(&k).copied().unwrap_or(ZERO),
            Source::Custom(f) => f(k),
        }
    }

    /// Largest `|k|` with a nonzero coefficient, when finitely supported.
    pub fn support(&self) -> Option<i64> {
        match &self.source {
            Source::Table(t) => Some(t.keys().map(|k| k.abs()).max().unwrap_or(0)),
            _ => None,
        }
    }

    /// Checks `a_{-k} = conj(a_k)` for `0 <= k <= k_max`.
    pub fn spot_check_hermitian(&self, k_max: i64) -> bool {
        (0..=k_max).all(|k| {
            let a = self.coefficient(k);
            let b = self.coefficient(-k);
            (a - b.conj()).norm() <= 1e-12 * (1.0 + a.norm())
        })
    }

    /// Partial sums `sum_{|k| <= K} |a_k|` for each requested `K`; a bounded,
    /// settling sequence is the numerical proxy for Wiener-class membership.
    pub fn absolute_partial_sums(&self, cutoffs: &[i64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(cutoffs.len());
        let mut sum = self.coefficient(0).norm();
        let mut k = 0;
        for &cut in cutoffs {
            while k < cut {
                k += 1;
                sum += self.coefficient(k).norm() + self.coefficient(-k).norm();
            }
            out.push(sum);
        }
        out
    }

    /// Samples the truncated Fourier series `sum_{|k| < grid/2} a_k e^{ikx}`
    /// at `x_j = 2 pi j / grid` and returns its real range.
    pub fn estimate_bounds(&self, grid: usize) -> SymbolBounds {
        let grid = dft::next_pow2(grid.max(4));
        let half = (grid / 2) as i64;
        let mut buf = vec![ZERO; grid];
        for k in 0..half {
            buf[k as usize] += self.coefficient(k);
            if k > 0 {
                buf[grid - k as usize] += self.coefficient(-k);
            }
        }
        dft::inverse_in_place(&mut buf);
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in &buf {
            let fx = v.re * grid as f64;
            min = min.min(fx);
            max = max.max(fx);
        }
        SymbolBounds { min, max }
    }
}

/// Hermitian Toeplitz matrix stored by its diagonals `a_{-(n-1)}, ..., a_{n-1}`.
#[derive(Debug, Clone)]
pub struct ToeplitzMatrix {
    n: usize,
    coeffs: Vec<Complex64>,
    embed_eigs: Vec<Complex64>,
}

impl ToeplitzMatrix {
    /// Hermitian Toeplitz matrix of order `n` generated by `g`.
    ///
    /// `a_k` is read for `0 <= k < n` and `a_{-k}` is set to `conj(a_k)` so the
    /// result is exactly Hermitian.
    pub fn from_function(g: &GeneratingFunction1D, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("Toeplitz order must be at least 1".into()));
        }
        if !g.is_hermitian() || !g.spot_check_hermitian((n as i64 - 1).min(64)) {
            return Err(Error::NotHermitian(format!("generating function '{}' is not conjugate-symmetric", g.name())));
        }
        let column: Vec<Complex64> = (0..n as i64).map(|k| g.coefficient(k)).collect();
        Self::hermitian_from_column(&column)
    }

    /// Hermitian Toeplitz matrix with first column `a_0, ..., a_{n-1}`.
    pub fn hermitian_from_column(column: &[Complex64]) -> Result<Self> {
        let n = column.len();
        if n == 0 {
            return Err(Error::InvalidArgument("Toeplitz order must be at least 1".into()));
        }
        let a0 = column[0];
        if a0.im.abs() > 1e-14 * (1.0 + a0.re.abs()) {
            return Err(Error::NotHermitian(format!("diagonal entry {a0} is not real")));
        }
        let mut coeffs = vec![ZERO; 2 * n - 1];
        coeffs[n - 1] = Complex64::new(a0.re, 0.0);
        for k in 1..n {
            coeffs[n - 1 + k] = column[k];
            coeffs[n - 1 - k] = column[k].conj();
        }
        Ok(Self::with_coeffs(n, coeffs))
    }

    fn with_coeffs(n: usize, coeffs: Vec<Complex64>) -> Self {
        let len = dft::next_pow2(2 * n - 1);
        let mut embed = vec![ZERO; len];
        for k in 0..n {
            embed[k] = coeffs[n - 1 + k];
        }
        for k in 1..n {
            embed[len - k] = coeffs[n - 1 - k];
        }
        dft::forward_in_place(&mut embed);
        Self { n, coeffs, embed_eigs: embed }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `a_k` for `|k| <= n - 1`, zero outside.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        let n = self.n as i64;
        if k.abs() >= n {
            ZERO
        } else {
            self.coeffs[(k + n - 1) as usize]
        }
    }

    pub fn entry(&self, p: usize, q: usize) -> Complex64 {
        self.coefficient(p as i64 - q as i64)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.n, x.len())?;
        Ok(self.matvec_unchecked(x))
    }

    pub(crate) fn matvec_unchecked(&self, x: &[Complex64]) -> Vec<Complex64> {
        let len = self.embed_eigs.len();
        let mut buf = vec![ZERO; len];
        buf[..self.n].copy_from_slice(x);
        dft::forward_in_place(&mut buf);
        for (b, e) in buf.iter_mut().zip(&self.embed_eigs) {
            *b *= e;
        }
        dft::inverse_in_place(&mut buf);
        buf.truncate(self.n);
        buf
    }

    pub fn to_dense(&self) -> HermitianDense {
        let d = DenseMatrix::from_fn(self.n, |p, q| self.entry(p, q));
        HermitianDense::new_unchecked(d)
    }

    /// Power-iteration estimate of `||A||_2` using the fast product.
    pub fn norm2_estimate(&self, steps: usize) -> f64 {
        let mut x: Vec<Complex64> =
            (0..self.n).map(|i| Complex64::new(1.0 + (i as f64 * 0.618).fract(), 0.0)).collect();
        let mut sigma = 0.0;
        for _ in 0..steps {
            let nx = vec_norm(&x);
            if nx == 0.0 {
                return 0.0;
            }
            x.iter_mut().for_each(|v| *v /= nx);
            x = self.matvec_unchecked(&x);
            sigma = vec_norm(&x);
        }
        sigma
    }
}

/// Writes `k, re(a_k), im(a_k)` for `-k_max <= k <= k_max`.
pub fn write_coefficients_csv<W: Write>(g: &GeneratingFunction1D, k_max: i64, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "re", "im"])?;
    for k in -k_max..=k_max {
        let a = g.coefficient(k);
        w.write_record([k.to_string(), a.re.to_string(), a.im.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a coefficient table written by [`write_coefficients_csv`]. A header
/// row is optional.
pub fn read_coefficients_csv<R: Read>(input: R) -> Result<GeneratingFunction1D> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(input);
    let mut entries = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != 3 {
            return Err(Error::Parse(format!("line {}: expected 3 columns, found {}", line + 1, record.len())));
        }
        let k = match record[0].parse::<i64>() {
            Ok(k) => k,
            Err(_) if line == 0 => continue,
            Err(e) => return Err(Error::Parse(format!("line {}: bad index: {e}", line + 1))),
        };
        let re = parse_f64(&record[1], line)?;
        let im = parse_f64(&record[2], line)?;
        entries.push((k, Complex64::new(re, im)));
    }
    Ok(GeneratingFunction1D::from_table("coeff-file", entries))
}

pub(crate) fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.parse::<f64>().map_err(|e| Error::Parse(format!("line {}: bad number '{s}': {e}", line + 1)))
}
