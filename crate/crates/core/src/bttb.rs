//! Block Toeplitz matrices with Toeplitz blocks (BTTB) and their optimal
//! block circulant (BCCB) preconditioners.
//!
//! Vectors of length `n m` are stored block by block with the inner index
//! fastest: position `r m + p` holds inner index `p` of block `r`. The BTTB
//! matrix generated by `a_k^{(j)}` has entry `(r m + p, s m + q) = a_{p-q}^{(r-s)}`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::sync::Arc;

use num_complex::Complex64;

use crate::circulant::SINGULAR_THRESHOLD;
use crate::dense::DenseMatrix;
use crate::dft;
use crate::error::{check_len, Error, Result};
use crate::matfunc::{HermitianDense, ScalarFunction};
use crate::toeplitz::parse_f64;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

type CoefficientFn = Arc<dyn Fn(i64, i64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum Source {
    Builtin,
    Table(BTreeMap<(i64, i64), Complex64>),
    Custom(CoefficientFn),
}

/// Provider of the two-level coefficients `a_k^{(j)}`; `j` is the block
/// (outer) offset and `k` the offset within a block.
#[derive(Clone)]
pub struct GeneratingFunction2D {
    name: String,
    source: Source,
    hermitian: bool,
}

impl fmt::Debug for GeneratingFunction2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratingFunction2D")
            .field("name", &self.name)
            .field("hermitian", &self.hermitian)
            .finish()
    }
}

/// `a_k^{(j)} = 1 / ((|j| + 1)^2.1 + (|k| + 1)^2.1)`.
pub fn builtin_bttb_function() -> GeneratingFunction2D {
    GeneratingFunction2D { name: "bttb".to_string(), source: Source::Builtin, hermitian: true }
}

impl GeneratingFunction2D {
    /// `coefficient(j, k)` returns `a_k^{(j)}`.
    pub fn from_fn(
        name: impl Into<String>,
        hermitian: bool,
        coefficient: impl Fn(i64, i64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), source: Source::Custom(Arc::new(coefficient)), hermitian }
    }

    /// Finitely supported table keyed by `(j, k)`. The Hermitian flag is set
    /// when `a_{-k}^{(-j)} = conj(a_k^{(j)})` holds to 1e-14.
    pub fn from_table(name: impl Into<String>, entries: impl IntoIterator<Item = ((i64, i64), Complex64)>) -> Self {
        let table: BTreeMap<(i64, i64), Complex64> = entries.into_iter().collect();
        let hermitian = table.iter().all(|(&(j, k), &a)| {
            let mirror = table.get(&(-j, -k)).copied().unwrap_or(ZERO);
            (a - mirror.conj()).norm() <= 1e-14 * (1.0 + a.norm())
        });
        Self { name: name.into(), source: Source::Table(table), hermitian }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn coefficient(&self, j: i64, k: i64) -> Complex64 {
        match &self.source {
            Source::Builtin => {
                let p = |t: i64| (t.unsigned_abs() as f64 + 1.0).powf(2.1);
                Complex64::new(1.0 / (p(j) + p(k)), 0.0)
            }
            Source::Table(t) => t.get(&(j, k)).copied().unwrap_or(ZERO),
            Source::Custom(f) => f(j, k),
        }
    }

    /// Checks `a_{-k}^{(-j)} = conj(a_k^{(j)})` for `|j| <= j_max`, `|k| <= k_max`.
    pub fn spot_check_hermitian(&self, j_max: i64, k_max: i64) -> bool {
        (-j_max..=j_max).all(|j| {
            (-k_max..=k_max).all(|k| {
                let a = self.coefficient(j, k);
                (a - self.coefficient(-j, -k).conj()).norm() <= 1e-12 * (1.0 + a.norm())
            })
        })
    }
}

/// Writes `j, k, re, im` for `|j| <= j_max`, `|k| <= k_max`.
pub fn write_coefficients_csv_2d<W: Write>(g: &GeneratingFunction2D, j_max: i64, k_max: i64, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["j", "k", "re", "im"])?;
    for j in -j_max..=j_max {
        for k in -k_max..=k_max {
            let a = g.coefficient(j, k);
            w.write_record([j.to_string(), k.to_string(), a.re.to_string(), a.im.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a table written by [`write_coefficients_csv_2d`]; the header is optional.
pub fn read_coefficients_csv_2d<R: Read>(input: R) -> Result<GeneratingFunction2D> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(input);
    let mut entries = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != 4 {
            return Err(Error::Parse(format!("line {}: expected 4 columns, found {}", line + 1, record.len())));
        }
        let (j, k) = match (record[0].parse::<i64>(), record[1].parse::<i64>()) {
            (Ok(j), Ok(k)) => (j, k),
            _ if line == 0 => continue,
            _ => return Err(Error::Parse(format!("line {}: bad index", line + 1))),
        };
        let a = Complex64::new(parse_f64(&record[2], line)?, parse_f64(&record[3], line)?);
        entries.push(((j, k), a));
    }
    Ok(GeneratingFunction2D::from_table("coeff-file", entries))
}

/// Hermitian BTTB matrix of `n x n` blocks, each `m x m`.
#[derive(Debug, Clone)]
pub struct BttbMatrix {
    n: usize,
    m: usize,
    /// `a_k^{(j)}` at `(j + n - 1) * (2m - 1) + (k + m - 1)`.
    coeffs: Vec<Complex64>,
    embed_rows: usize,
    embed_cols: usize,
    embed_eigs: Vec<Complex64>,
}

impl BttbMatrix {
    pub fn from_function(g: &GeneratingFunction2D, n: usize, m: usize) -> Result<Self> {
        if !g.is_hermitian() || !g.spot_check_hermitian((n as i64 - 1).min(16), (m as i64 - 1).min(16)) {
            return Err(Error::NotHermitian(format!("generating function '{}' is not conjugate-symmetric", g.name())));
        }
        Self::hermitian_from_coefficients(n, m, |j, k| g.coefficient(j, k))
    }

    /// Reads `a_k^{(j)}` on the half plane `j > 0` or `j = 0, k >= 0` and fills
    /// the rest by conjugate symmetry, so the result is exactly Hermitian.
    pub fn hermitian_from_coefficients(n: usize, m: usize, a: impl Fn(i64, i64) -> Complex64) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument(format!("BTTB dimensions must be positive, got ({n}, {m})")));
        }
        let a00 = a(0, 0);
        if a00.im.abs() > 1e-14 * (1.0 + a00.re.abs()) {
            return Err(Error::NotHermitian(format!("diagonal entry {a00} is not real")));
        }
        let (ni, mi) = (n as i64, m as i64);
        let width = 2 * m - 1;
        let mut coeffs = vec![ZERO; (2 * n - 1) * width];
        for j in -(ni - 1)..ni {
            for k in -(mi - 1)..mi {
                let upper = j > 0 || (j == 0 && k >= 0);
                let v = if j == 0 && k == 0 {
                    Complex64::new(a00.re, 0.0)
                } else if upper {
                    a(j, k)
                } else {
                    a(-j, -k).conj()
                };
                coeffs[(j + ni - 1) as usize * width + (k + mi - 1) as usize] = v;
            }
        }
        Ok(Self::with_coeffs(n, m, coeffs))
    }

    fn with_coeffs(n: usize, m: usize, coeffs: Vec<Complex64>) -> Self {
        let rows = dft::next_pow2(2 * n - 1);
        let cols = dft::next_pow2(2 * m - 1);
        let (ni, mi) = (n as i64, m as i64);
        let width = 2 * m - 1;
        let mut embed = vec![ZERO; rows * cols];
        for j in -(ni - 1)..ni {
            for k in -(mi - 1)..mi {
                let r = j.rem_euclid(rows as i64) as usize;
                let c = k.rem_euclid(cols as i64) as usize;
                embed[r * cols + c] = coeffs[(j + ni - 1) as usize * width + (k + mi - 1) as usize];
            }
        }
        dft::forward2_in_place(&mut embed, rows, cols);
        Self { n, m, coeffs, embed_rows: rows, embed_cols: cols, embed_eigs: embed }
    }

    /// `(n, m)`: block count and block size.
    pub fn dims(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn dim(&self) -> usize {
        self.n * self.m
    }

    /// `a_k^{(j)}`, zero outside `|j| < n`, `|k| < m`.
    pub fn coefficient(&self, j: i64, k: i64) -> Complex64 {
        let (ni, mi) = (self.n as i64, self.m as i64);
        if j.abs() >= ni || k.abs() >= mi {
            return ZERO;
        }
        self.coeffs[(j + ni - 1) as usize * (2 * self.m - 1) + (k + mi - 1) as usize]
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        let (r, p) = (row / self.m, row % self.m);
        let (s, q) = (col / self.m, col % self.m);
        self.coefficient(r as i64 - s as i64, p as i64 - q as i64)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.dim(), x.len())?;
        Ok(self.matvec_unchecked(x))
    }

    pub(crate) fn matvec_unchecked(&self, x: &[Complex64]) -> Vec<Complex64> {
        let (rows, cols) = (self.embed_rows, self.embed_cols);
        let mut buf = vec![ZERO; rows * cols];
        for r in 0..self.n {
            buf[r * cols..r * cols + self.m].copy_from_slice(&x[r * self.m..(r + 1) * self.m]);
        }
        dft::forward2_in_place(&mut buf, rows, cols);
        for (b, e) in buf.iter_mut().zip(&self.embed_eigs) {
            *b *= e;
        }
        dft::inverse2_in_place(&mut buf, rows, cols);
        let mut y = Vec::with_capacity(self.dim());
        for r in 0..self.n {
            y.extend_from_slice(&buf[r * cols..r * cols + self.m]);
        }
        y
    }

    pub fn to_dense(&self) -> HermitianDense {
        HermitianDense::new_unchecked(DenseMatrix::from_fn(self.dim(), |r, c| self.entry(r, c)))
    }
}

/// Block circulant matrix with circulant blocks, diagonalized by the
/// two-dimensional transform: `C = (U_n (x) U_m)^* diag(eigs) (U_n (x) U_m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BccbMatrix {
    n: usize,
    m: usize,
    first_col: Vec<Complex64>,
    eigs: Vec<Complex64>,
}

impl BccbMatrix {
    /// `first_col[j m + k] = c_k^{(j)}`.
    pub fn from_first_column(n: usize, m: usize, first_col: Vec<Complex64>) -> Result<Self> {
        Self::check_dims(n, m, first_col.len())?;
        let mut eigs = first_col.clone();
        dft::forward2_in_place(&mut eigs, n, m);
        Ok(Self { n, m, first_col, eigs })
    }

    pub fn from_eigenvalues(n: usize, m: usize, eigs: Vec<Complex64>) -> Result<Self> {
        Self::check_dims(n, m, eigs.len())?;
        let mut first_col = eigs.clone();
        dft::inverse2_in_place(&mut first_col, n, m);
        Ok(Self { n, m, first_col, eigs })
    }

    fn check_dims(n: usize, m: usize, len: usize) -> Result<()> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument(format!("BCCB dimensions must be positive, got ({n}, {m})")));
        }
        check_len(n * m, len)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn dim(&self) -> usize {
        self.n * self.m
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
        self.eigs.iter().all(|e| e.im.abs() <= crate::circulant::HERMITIAN_TOLERANCE * scale)
    }

    pub fn is_singular(&self) -> bool {
        let max = self.max_abs_eig();
        max == 0.0 || self.eigs.iter().any(|e| e.norm() < SINGULAR_THRESHOLD * max)
    }

    pub fn is_hpd(&self) -> bool {
        self.is_hermitian() && self.eigs.iter().all(|e| e.re > 0.0) && !self.is_singular()
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.dim(), x.len())?;
        Ok(self.apply_diagonal(x, |e| e))
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.dim(), b.len())?;
        if self.is_singular() {
            let min_abs = self.eigs.iter().fold(f64::INFINITY, |m, e| m.min(e.norm()));
            return Err(Error::Singular { min_abs, max_abs: self.max_abs_eig() });
        }
        Ok(self.apply_diagonal(b, |e| 1.0 / e))
    }

    pub(crate) fn apply_diagonal(&self, x: &[Complex64], f: impl Fn(Complex64) -> Complex64) -> Vec<Complex64> {
        let mut y = x.to_vec();
        dft::forward2_in_place(&mut y, self.n, self.m);
        for (v, &e) in y.iter_mut().zip(&self.eigs) {
            *v *= f(e);
        }
        dft::inverse2_in_place(&mut y, self.n, self.m);
        y
    }

    pub fn map_eigenvalues(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let eigs = self.eigs.iter().map(|&e| f(e)).collect();
        Self::from_eigenvalues(self.n, self.m, eigs).expect("dimensions already checked")
    }

    /// `|C|`: eigenvalues replaced by their magnitudes.
    pub fn abs(&self) -> Self {
        self.map_eigenvalues(|e| e.norm().into())
    }

    pub fn apply_function(&self, h: &ScalarFunction) -> Result<Self> {
        let eigs = self.eigs.iter().map(|&e| h.eval(e)).collect::<Result<Vec<_>>>()?;
        Self::from_eigenvalues(self.n, self.m, eigs)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let (n, m) = (self.n, self.m);
        DenseMatrix::from_fn(n * m, |row, col| {
            let j = (row / m + n - col / m) % n;
            let k = (row % m + m - col % m) % m;
            self.first_col[j * m + k]
        })
    }
}

/// Frobenius-nearest BCCB matrix: the 1D optimal weighting applied at the
/// block level and within blocks,
/// `c_k^{(j)} = sum over j' in {j, j-n}, k' in {k, k-m} of
/// (n - |j'|)(m - |k'|) a_{k'}^{(j')} / (n m)`.
pub fn optimal_bccb_preconditioner(a: &BttbMatrix) -> BccbMatrix {
    let (n, m) = (a.n as i64, a.m as i64);
    let mut col = Vec::with_capacity((n * m) as usize);
    for j in 0..n {
        for k in 0..m {
            let v = a.coefficient(j, k) * ((n - j) * (m - k)) as f64
                + a.coefficient(j, k - m) * ((n - j) * k) as f64
                + a.coefficient(j - n, k) * (j * (m - k)) as f64
                + a.coefficient(j - n, k - m) * (j * k) as f64;
            col.push(v / (n * m) as f64);
        }
    }
    BccbMatrix::from_first_column(a.n, a.m, col).expect("dimensions from a valid BTTB")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn builtin_values() {
        let g = builtin_bttb_function();
        assert_eq!(g.coefficient(0, 0), c(0.5, 0.0));
        assert!((g.coefficient(0, 1) - c(1.0 / (1.0 + 2f64.powf(2.1)), 0.0)).norm() < 1e-15);
        assert_eq!(g.coefficient(-2, -3), g.coefficient(2, 3));
        assert_eq!(g.coefficient(2, 3), g.coefficient(3, 2));
        assert!(g.spot_check_hermitian(5, 5));
    }

    #[test]
    fn two_by_two_blocks() {
        let a = BttbMatrix::from_function(&builtin_bttb_function(), 2, 2).unwrap();
        let d = a.to_dense();
        for i in 0..4 {
            assert_eq!(d.get(i, i), c(0.5, 0.0));
        }
        assert_eq!(d.matrix().hermitian_defect(), 0.0);
        // row 1 = (block 0, inner 1), col 2 = (block 1, inner 0): j = -1, k = 1
        assert_eq!(d.get(1, 2), builtin_bttb_function().coefficient(-1, 1));
    }

    #[test]
    fn degenerate_levels() {
        let g = builtin_bttb_function();
        let a = BttbMatrix::from_function(&g, 1, 4).unwrap();
        let b = BttbMatrix::from_function(&g, 4, 1).unwrap();
        for p in 0..4 {
            for q in 0..4 {
                assert_eq!(a.entry(p, q), g.coefficient(0, p as i64 - q as i64));
                assert_eq!(b.entry(p, q), g.coefficient(p as i64 - q as i64, 0));
            }
        }
    }

    #[test]
    fn identity_matvec() {
        let a = BttbMatrix::hermitian_from_coefficients(3, 2, |j, k| if j == 0 && k == 0 { c(1., 0.) } else { ZERO })
            .unwrap();
        let x: Vec<Complex64> = (0..6).map(|i| c(i as f64, -(i as f64) / 2.0)).collect();
        let y = a.matvec(&x).unwrap();
        assert!(y.iter().zip(&x).all(|(a, b)| (a - b).norm() < 1e-14));
        assert!(a.matvec(&x[..5]).is_err());
    }

    #[test]
    fn matvec_matches_dense() {
        // real part even, imaginary part odd: Hermitian
        let g = GeneratingFunction2D::from_fn("test", true, |j, k| {
            let d = if j == 0 && k == 0 { 3.0 } else { 0.0 };
            c(d + 1.0 / (1.0 + (j * j + 2 * k * k) as f64), 0.3 * (j + 2 * k) as f64 / 7.0)
        });
        for (n, m) in [(1, 5), (5, 1), (3, 4), (8, 8)] {
            let a = BttbMatrix::from_function(&g, n, m).unwrap();
            let x: Vec<Complex64> = (0..n * m).map(|i| c((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect();
            let fast = a.matvec(&x).unwrap();
            let slow = a.to_dense().matvec(&x).unwrap();
            let err = fast.iter().zip(&slow).fold(0.0f64, |e, (p, q)| e.max((p - q).norm()));
            assert!(err < 1e-12, "({n},{m}) err {err}");
        }
    }

    #[test]
    fn bccb_roundtrip_and_abs() {
        let col: Vec<Complex64> = (0..16).map(|i| c(1.0 + (i as f64).cos(), (i as f64 * 0.5).sin())).collect();
        let bc = BccbMatrix::from_first_column(4, 4, col.clone()).unwrap();
        let back = BccbMatrix::from_eigenvalues(4, 4, bc.eigenvalues().to_vec()).unwrap();
        assert!(back.first_column().iter().zip(&col).all(|(a, b)| (a - b).norm() < 1e-12));
        let b: Vec<Complex64> = (0..16).map(|i| c(i as f64, 1.0)).collect();
        let x = bc.solve(&b).unwrap();
        let y = bc.matvec(&x).unwrap();
        assert!(y.iter().zip(&b).all(|(p, q)| (p - q).norm() < 1e-11 * 16.0));

        let minus = BccbMatrix::from_first_column(2, 3, {
            let mut v = vec![ZERO; 6];
            v[0] = c(-1.0, 0.0);
            v
        })
        .unwrap();
        let abs = minus.abs();
        assert!((abs.first_column()[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(abs.first_column()[1..].iter().all(|v| v.norm() < 1e-15));
        assert!(abs.is_hpd());
    }

    #[test]
    fn bccb_dense_matches_matvec() {
        let col: Vec<Complex64> = (0..6).map(|i| c(i as f64 + 1.0, 0.5 * i as f64)).collect();
        let bc = BccbMatrix::from_first_column(2, 3, col).unwrap();
        let x: Vec<Complex64> = (0..6).map(|i| c(1.0, -(i as f64))).collect();
        let fast = bc.matvec(&x).unwrap();
        let slow = bc.to_dense().matvec(&x).unwrap();
        assert!(fast.iter().zip(&slow).all(|(p, q)| (p - q).norm() < 1e-12));
    }

    #[test]
    fn singular_bccb_solve_fails() {
        let bc = BccbMatrix::from_eigenvalues(2, 2, vec![c(1., 0.), ZERO, c(2., 0.), c(1., 0.)]).unwrap();
        assert!(matches!(bc.solve(&[c(1., 0.); 4]), Err(Error::Singular { .. })));
    }

    #[test]
    fn optimal_bccb_of_bccb_is_itself() {
        // periodic, even coefficients give a BTTB that is already BCCB
        let (n, m) = (3usize, 4usize);
        let base = |j: i64, k: i64| {
            let (x, y) = (j as f64 / n as f64, k as f64 / m as f64);
            c(5.0 + (2.0 * std::f64::consts::PI * x).cos() + 2.0 * (2.0 * std::f64::consts::PI * y).cos(), 0.0)
        };
        let a = BttbMatrix::hermitian_from_coefficients(n, m, base).unwrap();
        let col: Vec<Complex64> = (0..n * m).map(|i| base((i / m) as i64, (i % m) as i64)).collect();
        let bc = BccbMatrix::from_first_column(n, m, col).unwrap();
        assert!((a.to_dense().matrix().sub(&bc.to_dense()).unwrap()).frobenius_norm() < 1e-13);
        let opt = optimal_bccb_preconditioner(&a);
        assert!(opt.first_column().iter().zip(bc.first_column()).all(|(p, q)| (p - q).norm() < 1e-14));
    }

    #[test]
    fn single_block_reduces_to_1d() {
        let g = builtin_bttb_function();
        let a = BttbMatrix::from_function(&g, 1, 5).unwrap();
        let col: Vec<Complex64> = (0..5).map(|k| g.coefficient(0, k)).collect();
        let t = crate::toeplitz::ToeplitzMatrix::hermitian_from_column(&col).unwrap();
        let one_d = crate::circulant::optimal_preconditioner(&t);
        let two_d = optimal_bccb_preconditioner(&a);
        assert!(two_d.first_column().iter().zip(one_d.first_column()).all(|(p, q)| (p - q).norm() < 1e-15));
    }

    #[test]
    fn csv_roundtrip() {
        let g = builtin_bttb_function();
        let mut buf = Vec::new();
        write_coefficients_csv_2d(&g, 2, 3, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("j,k,re,im\n"));
        let back = read_coefficients_csv_2d(buf.as_slice()).unwrap();
        assert!(back.is_hermitian());
        assert_eq!(back.coefficient(-2, 3), g.coefficient(-2, 3));
        assert_eq!(back.coefficient(3, 0), ZERO);
    }
}
