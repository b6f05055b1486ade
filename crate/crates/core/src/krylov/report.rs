use std::fmt;
use std::io::Write;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Cg,
    Minres,
    Gmres,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Cg => "cg",
            Self::Minres => "minres",
            Self::Gmres => "gmres",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cg" | "pcg" => Ok(Self::Cg),
            "minres" => Ok(Self::Minres),
            "gmres" => Ok(Self::Gmres),
            other => Err(format!("unknown method '{other}' (expected cg, minres or gmres)")),
        }
    }
}

pub const REPORT_CSV_HEADER: [&str; 8] =
    ["method", "preconditioner", "n", "m", "iterations", "converged", "final_relres", "seconds"];

/// One solver run: a single cell of an iteration-count table.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub method: Method,
    pub preconditioner: String,
    pub n: usize,
    /// Inner dimension for two-level problems.
    pub m: Option<usize>,
    pub iterations: usize,
    /// Relative residual after each iteration (the quantity the stopping test uses).
    pub residual_history: Vec<f64>,
    pub converged: bool,
    /// The residual the stopping test was applied to, recomputed explicitly.
    pub final_relres: f64,
    /// `||b - A x|| / ||b||` at exit.
    pub true_relres: f64,
    pub seconds: f64,
}

impl SolveReport {
    pub fn with_labels(mut self, preconditioner: impl Into<String>, n: usize, m: Option<usize>) -> Self {
        self.preconditioner = preconditioner.into();
        self.n = n;
        self.m = m;
        self
    }

    pub fn csv_record(&self) -> [String; 8] {
        [
            self.method.to_string(),
            self.preconditioner.clone(),
            self.n.to_string(),
            self.m.map(|m| m.to_string()).unwrap_or_default(),
            self.iterations.to_string(),
            self.converged.to_string(),
            format!("{:e}", self.final_relres),
            format!("{:.3}", self.seconds),
        ]
    }
}

/// Writes reports as CSV with [`REPORT_CSV_HEADER`].
pub fn write_reports_csv<'a, W: Write>(reports: impl IntoIterator<Item = &'a SolveReport>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_CSV_HEADER)?;
    for r in reports {
        w.write_record(r.csv_record())?;
    }
    w.flush()?;
    Ok(())
}
