//! Experiment configuration and drivers behind the `circprec` tool: single
//! solves, the iteration-count tables, spectrum reports and coefficient dumps.
//!
//! Every run is deterministic. The right-hand side is the all-ones vector and
//! the initial guess is zero.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bttb::{
    builtin_bttb_function, optimal_bccb_preconditioner, read_coefficients_csv_2d, write_coefficients_csv_2d, BccbMatrix,
    BttbMatrix, GeneratingFunction2D,
};
use crate::circulant::{optimal_preconditioner, strang_preconditioner, superoptimal_preconditioner, CirculantMatrix};
use crate::error::{Error, Result};
use crate::krylov::{cg, gmres, minres, Method, Preconditioner, SolveOptions, SolveReport};
use crate::matfunc::{hermitian_eig, EigenDecomposition, HermitianDense, ScalarFunction};
use crate::spectrum::{clustering_trend, ClusterReport, DftDiagonal, SpectrumProblem, DEFAULT_EPSILON};
use crate::toeplitz::{
    builtin_wiener_function, read_coefficients_csv, write_coefficients_csv, GeneratingFunction1D, ToeplitzMatrix,
};

/// Keys accepted in a configuration file and as command-line flags.
pub const CONFIG_KEYS: [&str; 10] = ["func", "precond", "method", "n", "m", "tol", "maxit", "eps", "coeff-file", "generator"];

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionId {
    Exp,
    Cos,
    Sinh,
    /// `z^3 + z^2 + z + 1`.
    Cubic,
    Identity,
    /// Taylor coefficients read from a file, see [`parse_taylor`].
    Taylor(PathBuf),
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exp => "exp",
            Self::Cos => "cos",
            Self::Sinh => "sinh",
            Self::Cubic => "cubic",
            Self::Identity => "identity",
            Self::Taylor(_) => "taylor",
        })
    }
}

impl FromStr for FunctionId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let taylor_path = s
            .strip_prefix("taylor:")
            .or_else(|| s.strip_prefix("taylor(").and_then(|r| r.strip_suffix(')')));
        if let Some(path) = taylor_path {
            if path.is_empty() {
                return Err(Error::InvalidConfig("taylor needs a coefficient file, e.g. taylor:coeffs.txt".into()));
            }
            return Ok(Self::Taylor(PathBuf::from(path)));
        }
        match s.to_ascii_lowercase().as_str() {
            "exp" => Ok(Self::Exp),
            "cos" => Ok(Self::Cos),
            "sinh" => Ok(Self::Sinh),
            "cubic" | "poly" => Ok(Self::Cubic),
            "identity" | "id" => Ok(Self::Identity),
            "taylor" => Err(Error::InvalidConfig("taylor needs a coefficient file, e.g. taylor:coeffs.txt".into())),
            other => Err(Error::InvalidConfig(format!(
                "unknown function '{other}' (expected exp, cos, sinh, cubic, identity or taylor:FILE)"
            ))),
        }
    }
}

impl FunctionId {
    pub fn scalar(&self) -> Result<ScalarFunction> {
        Ok(match self {
            Self::Exp => ScalarFunction::Exp,
            Self::Cos => ScalarFunction::Cos,
            Self::Sinh => ScalarFunction::Sinh,
            Self::Cubic => ScalarFunction::cubic(),
            Self::Identity => ScalarFunction::Identity,
            Self::Taylor(path) => parse_taylor(BufReader::new(File::open(path)?))?,
        })
    }
}

/// Reads a truncated Taylor series. Each line is `k,c_k` (power and real
/// coefficient); a `radius,r` line sets the radius of convergence (default
/// infinite). Blank lines, `#` comments and a `k,c` header are skipped.
pub fn parse_taylor<R: Read>(mut input: R) -> Result<ScalarFunction> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let mut coeffs: Vec<f64> = Vec::new();
    let mut radius = f64::INFINITY;
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("line {}: expected 'k,c_k'", line_no + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        let value_f = || value.parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {e}", line_no + 1)));
        if key.eq_ignore_ascii_case("radius") {
            radius = value_f()?;
            if !(radius > 0.0) {
                return Err(Error::Parse(format!("line {}: radius must be positive", line_no + 1)));
            }
            continue;
        }
        let k = match key.parse::<usize>() {
            Ok(k) => k,
            Err(_) if coeffs.is_empty() && value.parse::<f64>().is_err() => continue,
            Err(e) => return Err(Error::Parse(format!("line {}: bad power '{key}': {e}", line_no + 1))),
        };
        if coeffs.len() <= k {
            coeffs.resize(k + 1, 0.0);
        }
        coeffs[k] = value_f()?;
    }
    if coeffs.is_empty() {
        return Err(Error::Parse("Taylor file has no coefficients".into()));
    }
    Ok(ScalarFunction::Taylor { coeffs, radius })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Builtin1d,
    Builtin2d,
    /// Coefficient CSV: `k,re,im` for one level, `j,k,re,im` for two.
    CoeffFile(PathBuf),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Builtin1d => f.write_str("builtin1d"),
            Self::Builtin2d => f.write_str("builtin2d"),
            Self::CoeffFile(p) => write!(f, "coeff-file:{}", p.display()),
        }
    }
}

/// A generator with its coefficients loaded.
#[derive(Debug, Clone)]
pub enum Symbol {
    OneLevel(GeneratingFunction1D),
    TwoLevel(GeneratingFunction2D),
}

impl Generator {
    pub fn load(&self, two_level: bool) -> Result<Symbol> {
        Ok(match (self, two_level) {
            (Self::Builtin1d, _) => Symbol::OneLevel(builtin_wiener_function()),
            (Self::Builtin2d, _) => Symbol::TwoLevel(builtin_bttb_function()),
            (Self::CoeffFile(p), false) => Symbol::OneLevel(read_coefficients_csv(BufReader::new(File::open(p)?))?),
            (Self::CoeffFile(p), true) => Symbol::TwoLevel(read_coefficients_csv_2d(BufReader::new(File::open(p)?))?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PreconditionerKind {
    None,
    Strang,
    Optimal,
    Superoptimal,
    StrangAbs,
    OptimalAbs,
    SuperoptimalAbs,
    BccbOptimal,
    BccbOptimalAbs,
}

impl PreconditionerKind {
    pub const ALL: [Self; 9] = [
        Self::None,
        Self::Strang,
        Self::Optimal,
        Self::Superoptimal,
        Self::StrangAbs,
        Self::OptimalAbs,
        Self::SuperoptimalAbs,
        Self::BccbOptimal,
        Self::BccbOptimalAbs,
    ];

    pub fn is_abs(self) -> bool {
        matches!(self, Self::StrangAbs | Self::OptimalAbs | Self::SuperoptimalAbs | Self::BccbOptimalAbs)
    }

    pub fn is_two_level(self) -> bool {
        matches!(self, Self::BccbOptimal | Self::BccbOptimalAbs)
    }
}

impl fmt::Display for PreconditionerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::None => "none",
            Self::Strang => "strang",
            Self::Optimal => "optimal",
            Self::Superoptimal => "superoptimal",
            Self::StrangAbs => "strang-abs",
            Self::OptimalAbs => "optimal-abs",
            Self::SuperoptimalAbs => "superoptimal-abs",
            Self::BccbOptimal => "bccb-optimal",
            Self::BccbOptimalAbs => "bccb-optimal-abs",
        })
    }
}

impl FromStr for PreconditionerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Self::ALL.into_iter().find(|k| k.to_string() == s).ok_or_else(|| {
            let names: Vec<String> = Self::ALL.iter().map(|k| k.to_string()).collect();
            Error::InvalidConfig(format!("unknown preconditioner '{s}' (expected one of {})", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub function: FunctionId,
    pub generator: Generator,
    /// Orders `n` to run, ascending.
    pub sizes: Vec<usize>,
    /// Block size for two-level problems.
    pub m: Option<usize>,
    pub preconditioner: PreconditionerKind,
    pub method: Method,
    pub tol: f64,
    pub maxit: Option<usize>,
    pub epsilon: f64,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected key = value", line_no + 1)))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(Error::InvalidConfig(format!("line {}: unknown key '{key}'", line_no + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.trim().parse().map_err(|e| Error::InvalidConfig(format!("{key} = '{value}': {e}")))
}

impl ExperimentConfig {
    /// Builds and validates a configuration from `key -> value` pairs using
    /// the names in [`CONFIG_KEYS`].
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        if let Some(key) = map.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
            return Err(Error::InvalidConfig(format!("unknown key '{key}'")));
        }
        let get = |k: &str| map.get(k).map(String::as_str);
        let function: FunctionId = get("func").unwrap_or("exp").parse()?;
        let sizes = match get("n") {
            Some(v) => v.split(',').map(|s| parse_value::<usize>("n", s)).collect::<Result<Vec<_>>>()?,
            None => return Err(Error::InvalidConfig("n is required".into())),
        };
        let m = get("m").map(|v| parse_value::<usize>("m", v)).transpose()?;
        let preconditioner: PreconditionerKind = get("precond").unwrap_or("none").parse()?;
        let generator = match (get("generator"), get("coeff-file")) {
            (_, Some(path)) => Generator::CoeffFile(PathBuf::from(path)),
            (Some("builtin1d"), None) => Generator::Builtin1d,
            (Some("builtin2d"), None) => Generator::Builtin2d,
            (Some("coeff-file"), None) => {
                return Err(Error::InvalidConfig("generator coeff-file needs --coeff-file".into()));
            }
            (Some(other), None) => {
                return Err(Error::InvalidConfig(format!(
                    "unknown generator '{other}' (expected builtin1d, builtin2d or coeff-file)"
                )));
            }
            (None, None) if m.is_some() || preconditioner.is_two_level() => Generator::Builtin2d,
            (None, None) => Generator::Builtin1d,
        };
        let method = match get("method") {
            Some(v) => v.parse::<Method>().map_err(Error::InvalidConfig)?,
            None if function == FunctionId::Cos => Method::Minres,
            None => Method::Cg,
        };
        let config = Self {
            function,
            generator,
            sizes,
            m,
            preconditioner,
            method,
            tol: get("tol").map(|v| parse_value("tol", v)).transpose()?.unwrap_or(1e-7),
            maxit: get("maxit").map(|v| parse_value("maxit", v)).transpose()?,
            epsilon: get("eps").map(|v| parse_value("eps", v)).transpose()?.unwrap_or(DEFAULT_EPSILON),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn is_two_level(&self) -> bool {
        match self.generator {
            Generator::Builtin1d => false,
            Generator::Builtin2d => true,
            Generator::CoeffFile(_) => self.m.is_some(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return bad("n must be a list of positive orders".into());
        }
        if self.sizes.windows(2).any(|w| w[0] > w[1]) {
            return bad("orders in n must be ascending".into());
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad(format!("tol must be positive and finite, got {}", self.tol));
        }
        if self.maxit == Some(0) {
            return bad("maxit must be at least 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("eps must be positive and finite, got {}", self.epsilon));
        }
        match (&self.generator, self.m) {
            (Generator::Builtin1d, Some(_)) => return bad("m applies only to two-level problems (builtin2d)".into()),
            (Generator::Builtin2d, None) => return bad("builtin2d needs the block size m".into()),
            (_, Some(0)) => return bad("m must be positive".into()),
            _ => {}
        }
        let two_level = self.is_two_level();
        if self.preconditioner.is_two_level() && !two_level {
            return bad(format!("{} needs a two-level problem (set m)", self.preconditioner));
        }
        if two_level && self.preconditioner != PreconditionerKind::None && !self.preconditioner.is_two_level() {
            return bad(format!(
                "{} is a one-level preconditioner; use bccb-optimal or bccb-optimal-abs for two-level problems",
                self.preconditioner
            ));
        }
        if self.method == Method::Cg && self.function == FunctionId::Cos {
            return bad("cg needs a positive definite system but cos(A) is indefinite; use minres or gmres".into());
        }
        Ok(())
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions::new(self.tol, self.maxit)
    }
}

/// A Toeplitz or BTTB coefficient matrix.
#[derive(Debug, Clone)]
pub enum Problem {
    OneLevel(ToeplitzMatrix),
    TwoLevel(BttbMatrix),
}

impl Problem {
    pub fn build(symbol: &Symbol, n: usize, m: Option<usize>) -> Result<Self> {
        match (symbol, m) {
            (Symbol::OneLevel(g), _) => Ok(Self::OneLevel(ToeplitzMatrix::from_function(g, n)?)),
            (Symbol::TwoLevel(g), Some(m)) => Ok(Self::TwoLevel(BttbMatrix::from_function(g, n, m)?)),
            (Symbol::TwoLevel(_), None) => Err(Error::InvalidConfig("two-level problem needs m".into())),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::OneLevel(a) => a.dim(),
            Self::TwoLevel(a) => a.dim(),
        }
    }

    pub fn to_dense(&self) -> HermitianDense {
        match self {
            Self::OneLevel(a) => a.to_dense(),
            Self::TwoLevel(a) => a.to_dense(),
        }
    }
}

/// A circulant or BCCB preconditioner.
#[derive(Debug, Clone)]
pub enum BuiltPreconditioner {
    Circulant(CirculantMatrix),
    Bccb(BccbMatrix),
}

impl BuiltPreconditioner {
    pub fn as_krylov(&self) -> &dyn Preconditioner {
        match self {
            Self::Circulant(c) => c,
            Self::Bccb(c) => c,
        }
    }

    pub fn into_dft(self) -> Box<dyn DftDiagonal + Send> {
        match self {
            Self::Circulant(c) => Box::new(c),
            Self::Bccb(c) => Box::new(c),
        }
    }
}

/// `h(C)` or `|h(C)|` for the chosen base circulant `C`; `None` for no
/// preconditioner.
pub fn build_preconditioner(
    problem: &Problem,
    kind: PreconditionerKind,
    h: &ScalarFunction,
) -> Result<Option<BuiltPreconditioner>> {
    use PreconditionerKind as K;
    let built = match (problem, kind) {
        (_, K::None) => return Ok(None),
        (Problem::OneLevel(a), K::Strang | K::StrangAbs) => BuiltPreconditioner::Circulant(strang_preconditioner(a)),
        (Problem::OneLevel(a), K::Optimal | K::OptimalAbs) => BuiltPreconditioner::Circulant(optimal_preconditioner(a)),
        (Problem::OneLevel(a), K::Superoptimal | K::SuperoptimalAbs) => {
            BuiltPreconditioner::Circulant(superoptimal_preconditioner(a)?)
        }
        (Problem::TwoLevel(a), K::BccbOptimal | K::BccbOptimalAbs) => {
            BuiltPreconditioner::Bccb(optimal_bccb_preconditioner(a))
        }
        (Problem::OneLevel(_), _) | (Problem::TwoLevel(_), _) => {
            return Err(Error::InvalidConfig(format!("preconditioner {kind} does not fit this problem")));
        }
    };
    Ok(Some(match built {
        BuiltPreconditioner::Circulant(c) => {
            let hc = c.apply_function(h)?;
            BuiltPreconditioner::Circulant(if kind.is_abs() { hc.abs() } else { hc })
        }
        BuiltPreconditioner::Bccb(c) => {
            let hc = c.apply_function(h)?;
            BuiltPreconditioner::Bccb(if kind.is_abs() { hc.abs() } else { hc })
        }
    }))
}

/// Runs `method` on `h(A) x = ones`.
pub fn solve_system(
    method: Method,
    ha: &HermitianDense,
    pre: Option<&dyn Preconditioner>,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    let b = vec![Complex64::new(1.0, 0.0); ha.dim()];
    let solution = match method {
        Method::Cg => cg(ha, pre, &b, opts)?,
        Method::Minres => minres(ha, pre, &b, opts)?,
        Method::Gmres => gmres(ha, pre, &b, opts)?,
    };
    Ok(solution.report)
}

/// Layout of one of the five iteration-count tables.
#[derive(Debug, Clone, PartialEq)]
pub struct TableLayout {
    pub id: u8,
    pub function: FunctionId,
    pub generator: Generator,
    /// `(n, m)` per row.
    pub sizes: Vec<(usize, Option<usize>)>,
    /// Cells of each row in output order.
    pub cells: Vec<(Method, PreconditionerKind)>,
}

pub fn table_layout(id: u8) -> Result<TableLayout> {
    use PreconditionerKind as K;
    let one_level = |function: FunctionId, method: Method| TableLayout {
        id,
        function,
        generator: Generator::Builtin1d,
        sizes: [128, 256, 512, 1024].into_iter().map(|n| (n, None)).collect(),
        cells: vec![
            (method, K::None),
            (method, K::SuperoptimalAbs),
            (method, K::StrangAbs),
            (Method::Gmres, K::None),
            (Method::Gmres, K::Superoptimal),
            (Method::Gmres, K::Strang),
        ],
    };
    Ok(match id {
        1 => one_level(FunctionId::Exp, Method::Cg),
        2 => one_level(FunctionId::Cos, Method::Minres),
        3 => one_level(FunctionId::Sinh, Method::Cg),
        4 => one_level(FunctionId::Cubic, Method::Cg),
        5 => TableLayout {
            id,
            function: FunctionId::Exp,
            generator: Generator::Builtin2d,
            sizes: vec![(16, Some(8)), (16, Some(16)), (32, Some(16)), (32, Some(32))],
            cells: vec![
                (Method::Minres, K::None),
                (Method::Minres, K::BccbOptimalAbs),
                (Method::Gmres, K::None),
                (Method::Gmres, K::BccbOptimal),
            ],
        },
        other => return Err(Error::InvalidConfig(format!("unknown table {other} (expected 1 to 5)"))),
    })
}

type CacheKey = (String, usize, Option<usize>);
type CacheSlot = Arc<Mutex<Option<Arc<(Problem, EigenDecomposition)>>>>;

/// Runs experiments, sharing eigendecompositions of the coefficient
/// matrices between runs of the same generator and size. Safe to share
/// between threads; each decomposition is computed once.
#[derive(Default)]
pub struct Runner {
    cache: Mutex<HashMap<CacheKey, CacheSlot>>,
}

impl Runner {
    pub fn new() -> Self {
        Self::default()
    }

    /// The coefficient matrix and its eigendecomposition.
    pub fn problem(
        &self,
        generator: &Generator,
        symbol: &Symbol,
        n: usize,
        m: Option<usize>,
    ) -> Result<Arc<(Problem, EigenDecomposition)>> {
        let slot = {
            let mut cache = self.cache.lock().expect("cache lock");
            Arc::clone(cache.entry((generator.to_string(), n, m)).or_default())
        };
        let mut slot = slot.lock().expect("cache slot lock");
        if let Some(hit) = &*slot {
            return Ok(Arc::clone(hit));
        }
        let problem = Problem::build(symbol, n, m)?;
        let eig = hermitian_eig(&problem.to_dense())?;
        let entry = Arc::new((problem, eig));
        *slot = Some(Arc::clone(&entry));
        Ok(entry)
    }

    /// One report per order in `config.sizes`.
    pub fn solve(&self, config: &ExperimentConfig) -> Result<Vec<SolveReport>> {
        config.validate()?;
        let symbol = config.generator.load(config.is_two_level())?;
        let h = config.function.scalar()?;
        let opts = config.solve_options();
        config
            .sizes
            .iter()
            .map(|&n| {
                let entry = self.problem(&config.generator, &symbol, n, config.m)?;
                let (problem, eig) = &*entry;
                let ha = eig.apply_function(&h)?;
                let pre = build_preconditioner(problem, config.preconditioner, &h)?;
                let report = solve_system(config.method, &ha, pre.as_ref().map(|p| p.as_krylov()), &opts)?;
                Ok(report.with_labels(config.preconditioner.to_string(), n, config.m))
            })
            .collect()
    }

    /// Every cell of table `id`, rows in size order and cells in layout
    /// order. `sizes` restricts the rows.
    pub fn table(&self, id: u8, sizes: Option<&[(usize, Option<usize>)]>, opts: &SolveOptions) -> Result<Vec<SolveReport>> {
        let layout = table_layout(id)?;
        let symbol = layout.generator.load(layout.generator == Generator::Builtin2d)?;
        let h = layout.function.scalar()?;
        let sizes = sizes.map(<[_]>::to_vec).unwrap_or_else(|| layout.sizes.clone());
        let mut reports = Vec::new();
        for (n, m) in sizes {
            let entry = self.problem(&layout.generator, &symbol, n, m)?;
            let (problem, eig) = &*entry;
            let ha = eig.apply_function(&h)?;
            let row: Vec<SolveReport> = layout
                .cells
                .par_iter()
                .map(|&(method, kind)| {
                    let pre = build_preconditioner(problem, kind, &h)?;
                    let report = solve_system(method, &ha, pre.as_ref().map(|p| p.as_krylov()), opts)?;
                    Ok(report.with_labels(kind.to_string(), n, m))
                })
                .collect::<Result<_>>()?;
            reports.extend(row);
        }
        Ok(reports)
    }

    /// Spectrum of `M^{-1} h(A)` for each order in `config.sizes`.
    pub fn spectrum(&self, config: &ExperimentConfig) -> Result<Vec<ClusterReport>> {
        config.validate()?;
        let symbol = config.generator.load(config.is_two_level())?;
        let h = config.function.scalar()?;
        let sizes: Vec<(usize, Option<usize>)> = config.sizes.iter().map(|&n| (n, config.m)).collect();
        clustering_trend(
            &sizes,
            &config.function.to_string(),
            &config.preconditioner.to_string(),
            config.epsilon,
            |n, m| -> Result<SpectrumProblem> {
                let entry = self.problem(&config.generator, &symbol, n, m)?;
                let (problem, eig) = &*entry;
                let ha = eig.apply_function(&h)?;
                let pre = build_preconditioner(problem, config.preconditioner, &h)?;
                Ok((ha, pre.map(BuiltPreconditioner::into_dft)))
            },
        )
    }
}

/// Writes the coefficients that enter the largest requested matrix:
/// `|k| < n` for one level, `|j| < n`, `|k| < m` for two.
pub fn write_coefficients<W: Write>(config: &ExperimentConfig, out: W) -> Result<()> {
    let n = *config.sizes.last().ok_or_else(|| Error::InvalidConfig("n is required".into()))? as i64;
    match config.generator.load(config.is_two_level())? {
        Symbol::OneLevel(g) => write_coefficients_csv(&g, n - 1, out),
        Symbol::TwoLevel(g) => {
            let m = config.m.ok_or_else(|| Error::InvalidConfig("two-level coefficients need m".into()))? as i64;
            write_coefficients_csv_2d(&g, n - 1, m - 1, out)
        }
    }
}

/// Aligned text table of solver reports, derived from the same fields as
/// the CSV plus the true residual.
pub fn format_reports(reports: &[SolveReport]) -> String {
    let mut rows = vec![[
        "method".to_string(),
        "preconditioner".to_string(),
        "n".to_string(),
        "m".to_string(),
        "iterations".to_string(),
        "converged".to_string(),
        "final_relres".to_string(),
        "true_relres".to_string(),
    ]];
    for r in reports {
        let rec = r.csv_record();
        rows.push([
            rec[0].clone(),
            rec[1].clone(),
            rec[2].clone(),
            rec[3].clone(),
            rec[4].clone(),
            rec[5].clone(),
            format!("{:.3e}", r.final_relres),
            format!("{:.3e}", r.true_relres),
        ]);
    }
    format_rows(&rows)
}

/// Aligned text table of spectrum summaries.
pub fn format_cluster_reports(reports: &[ClusterReport]) -> String {
    let mut rows = vec![["n", "m", "function", "preconditioner", "epsilon", "outliers", "min_eig", "max_eig"].map(String::from)];
    for r in reports {
        let mut rec = r.csv_record();
        rec[6] = format!("{:.6}", r.min_eig);
        rec[7] = format!("{:.6}", r.max_eig);
        rows.push(rec);
    }
    format_rows(&rows)
}

fn format_rows<const N: usize>(rows: &[[String; N]]) -> String {
    let widths: Vec<usize> = (0..N).map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(cell, &w)| format!("{cell:>w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}
