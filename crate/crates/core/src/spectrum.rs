//! Spectra of preconditioned matrices and counts of eigenvalues away from `+-1`.
//!
//! For an HPD preconditioner `M` diagonalized by the DFT, `M^{-1} h(A)` is
//! similar to the Hermitian matrix `M^{-1/2} h(A) M^{-1/2}`, whose eigenvalues
//! the dense Hermitian solver computes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bttb::BccbMatrix;
use crate::circulant::CirculantMatrix;
use crate::dense::DenseMatrix;
use crate::error::{check_len, Error, Result};
use crate::matfunc::{hermitian_eigenvalues, HermitianDense};

/// Default half-width of the clusters around `+-1`.
pub const DEFAULT_EPSILON: f64 = 0.1;

/// Relative Hermitian defect tolerated in the symmetrized matrix.
const SYMMETRY_TOLERANCE: f64 = 1e-10;

pub const SUMMARY_CSV_HEADER: [&str; 8] =
    ["n", "m", "function", "preconditioner", "epsilon", "outliers", "min_eig", "max_eig"];

/// Matrices of the form `F^* diag(eigs) F` for a (one- or two-level) DFT `F`.
pub trait DftDiagonal: Sync {
    fn dim(&self) -> usize;
    fn eigenvalues(&self) -> &[Complex64];
    /// `F^* diag(f(eigs)) F x`.
    fn map_apply(&self, x: &[Complex64], f: &(dyn Fn(Complex64) -> Complex64 + Sync)) -> Vec<Complex64>;
    fn is_hpd(&self) -> bool;
}

impl DftDiagonal for CirculantMatrix {
    fn dim(&self) -> usize {
        CirculantMatrix::dim(self)
    }
    fn eigenvalues(&self) -> &[Complex64] {
        CirculantMatrix::eigenvalues(self)
    }
    fn map_apply(&self, x: &[Complex64], f: &(dyn Fn(Complex64) -> Complex64 + Sync)) -> Vec<Complex64> {
        self.apply_diagonal(x, f)
    }
    fn is_hpd(&self) -> bool {
        CirculantMatrix::is_hpd(self)
    }
}

impl DftDiagonal for BccbMatrix {
    fn dim(&self) -> usize {
        BccbMatrix::dim(self)
    }
    fn eigenvalues(&self) -> &[Complex64] {
        BccbMatrix::eigenvalues(self)
    }
    fn map_apply(&self, x: &[Complex64], f: &(dyn Fn(Complex64) -> Complex64 + Sync)) -> Vec<Complex64> {
        self.apply_diagonal(x, f)
    }
    fn is_hpd(&self) -> bool {
        BccbMatrix::is_hpd(self)
    }
}

/// Ascending eigenvalues of `M^{-1} h(A)`, computed from
/// `M^{-1/2} h(A) M^{-1/2}`. `m = None` means `M = I`.
pub fn preconditioned_spectrum(ha: &HermitianDense, m: Option<&dyn DftDiagonal>) -> Result<Vec<f64>> {
    let Some(m) = m else {
        return hermitian_eigenvalues(ha);
    };
    let n = ha.dim();
    check_len(n, m.dim())?;
    if !m.is_hpd() {
        return Err(Error::NotPositiveDefinite("preconditioner for a spectrum must be Hermitian positive definite".into()));
    }
    let inv_sqrt = |e: Complex64| Complex64::new(1.0 / e.re.sqrt(), 0.0);
    // W = M^{-1/2} h(A), then B = W M^{-1/2} = (M^{-1/2} W^*)^*
    let w = DenseMatrix::from_columns(n, |q| m.map_apply(&ha.matrix().column(q), &inv_sqrt));
    let w_adj = w.adjoint();
    let mut b = DenseMatrix::from_columns(n, |q| m.map_apply(&w_adj.column(q), &inv_sqrt)).adjoint();
    let scale = b.frobenius_norm().max(f64::MIN_POSITIVE);
    let defect = b.hermitian_defect();
    if defect > SYMMETRY_TOLERANCE * scale {
        return Err(Error::NotHermitian(format!(
            "symmetrized preconditioned matrix has relative defect {:.3e}",
            defect / scale
        )));
    }
    b.symmetrize();
    hermitian_eigenvalues(&HermitianDense::new(b)?)
}

/// Number of eigenvalues with `|lambda - 1| > eps` and `|lambda + 1| > eps`.
pub fn cluster_count(eigs: &[f64], epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(eigs.iter().filter(|&&l| (l - 1.0).abs() > epsilon && (l + 1.0).abs() > epsilon).count())
}

/// Spectrum of one preconditioned matrix and its outlier count.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterReport {
    pub n: usize,
    pub m: Option<usize>,
    pub function: String,
    pub preconditioner: String,
    pub epsilon: f64,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub outlier_count: usize,
    pub min_eig: f64,
    pub max_eig: f64,
}

impl ClusterReport {
    pub fn new(
        (n, m): (usize, Option<usize>),
        function: impl Into<String>,
        preconditioner: impl Into<String>,
        epsilon: f64,
        mut eigenvalues: Vec<f64>,
    ) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::InvalidArgument("empty spectrum".into()));
        }
        eigenvalues.sort_by(f64::total_cmp);
        let outlier_count = cluster_count(&eigenvalues, epsilon)?;
        Ok(Self {
            n,
            m,
            function: function.into(),
            preconditioner: preconditioner.into(),
            epsilon,
            min_eig: eigenvalues[0],
            max_eig: eigenvalues[eigenvalues.len() - 1],
            eigenvalues,
            outlier_count,
        })
    }

    pub fn csv_record(&self) -> [String; 8] {
        [
            self.n.to_string(),
            self.m.map(|m| m.to_string()).unwrap_or_default(),
            self.function.clone(),
            self.preconditioner.clone(),
            self.epsilon.to_string(),
            self.outlier_count.to_string(),
            format!("{:e}", self.min_eig),
            format!("{:e}", self.max_eig),
        ]
    }

    /// File stem identifying this run, e.g. `exp_superoptimal-abs_n512`.
    pub fn file_stem(&self) -> String {
        match self.m {
            Some(m) => format!("{}_{}_n{}_m{}", self.function, self.preconditioner, self.n, m),
            None => format!("{}_{}_n{}", self.function, self.preconditioner, self.n),
        }
    }

    /// Writes `index,eigenvalue`, one row per eigenvalue.
    pub fn write_eigenvalues_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "eigenvalue"])?;
        for (i, l) in self.eigenvalues.iter().enumerate() {
            w.write_record([i.to_string(), format!("{l:e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn write_summary_csv<'a, W: Write>(reports: impl IntoIterator<Item = &'a ClusterReport>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_CSV_HEADER)?;
    for r in reports {
        w.write_record(r.csv_record())?;
    }
    w.flush()?;
    Ok(())
}

/// A preconditioned problem at one size: `h(A)` and the preconditioner
/// (`None` for none).
pub type SpectrumProblem = (HermitianDense, Option<Box<dyn DftDiagonal + Send>>);

/// One [`ClusterReport`] per size, in the order given. Sizes run in parallel.
pub fn clustering_trend<F>(
    sizes: &[(usize, Option<usize>)],
    function: &str,
    preconditioner: &str,
    epsilon: f64,
    build: F,
) -> Result<Vec<ClusterReport>>
where
    F: Fn(usize, Option<usize>) -> Result<SpectrumProblem> + Sync,
{
    if sizes.windows(2).any(|w| w[0].0 * w[0].1.unwrap_or(1) > w[1].0 * w[1].1.unwrap_or(1)) {
        return Err(Error::InvalidArgument("sizes must be sorted".into()));
    }
    sizes
        .par_iter()
        .map(|&(n, m)| {
            let (ha, pre) = build(n, m)?;
            let eigs = preconditioned_spectrum(&ha, pre.as_deref().map(|p| p as &dyn DftDiagonal))?;
            ClusterReport::new((n, m), function, preconditioner, epsilon, eigs)
        })
        .collect()
}

/// Writes `summary.csv`, one eigenvalue CSV and one SVG scatter plot per
/// report into `dir`. Returns the paths written, summary first.
pub fn write_reports(reports: &[ClusterReport], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let summary = dir.join("summary.csv");
    write_summary_csv(reports, BufWriter::new(File::create(&summary)?))?;
    let mut paths = vec![summary];
    for r in reports {
        let csv_path = dir.join(format!("{}.csv", r.file_stem()));
        r.write_eigenvalues_csv(BufWriter::new(File::create(&csv_path)?))?;
        let svg_path = dir.join(format!("{}.svg", r.file_stem()));
        crate::plot::svg_from_eigenvalue_csv(&csv_path, &svg_path, &r.file_stem())?;
        paths.push(csv_path);
        paths.push(svg_path);
    }
    Ok(paths)
}
