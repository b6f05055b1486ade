use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use circprec::experiment::{
    format_cluster_reports, format_reports, parse_config_file, table_layout, write_coefficients, ExperimentConfig,
    Runner,
};
use circprec::krylov::{write_reports_csv, SolveOptions, SolveReport};
use circprec::spectrum::write_reports;
use circprec::Error;

/// Circulant preconditioners for functions of Hermitian Toeplitz and BTTB matrices.
#[derive(Parser)]
#[command(name = "circprec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve h(A) x = ones and report the iteration count.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Write the report CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit with status 2 if any solve fails to converge.
        #[arg(long)]
        strict: bool,
    },
    /// Reproduce one of the iteration-count tables (1-5).
    Bench {
        #[arg(long)]
        table: u8,
        /// Only run rows whose n is in this comma-separated list.
        #[arg(long)]
        n: Option<String>,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long)]
        maxit: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        strict: bool,
    },
    /// Eigenvalues of the preconditioned matrix and their clustering around +-1.
    Spectrum {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Cluster radius.
        #[arg(long)]
        eps: Option<String>,
        /// Output directory for summary.csv, eigenvalue CSVs and SVG plots.
        #[arg(long, default_value = "spectrum_out")]
        out: PathBuf,
    },
    /// Dump the generating-function coefficients entering A (CSV).
    Coeffs {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ProblemArgs {
    /// key = value file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// exp, cos, sinh, cubic, identity or taylor:FILE
    #[arg(long)]
    func: Option<String>,
    /// none, strang, optimal, superoptimal, *-abs, bccb-optimal, bccb-optimal-abs
    #[arg(long)]
    precond: Option<String>,
    /// cg, minres or gmres
    #[arg(long)]
    method: Option<String>,
    /// Order(s), comma separated and ascending.
    #[arg(long)]
    n: Option<String>,
    /// Block size for two-level problems.
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    maxit: Option<String>,
    /// builtin1d, builtin2d or coeff-file
    #[arg(long)]
    generator: Option<String>,
    #[arg(long)]
    coeff_file: Option<String>,
}

impl ProblemArgs {
    fn config(&self, eps: Option<&String>) -> circprec::Result<ExperimentConfig> {
        let mut map = match &self.config {
            Some(path) => parse_config_file(&std::fs::read_to_string(path)?)?,
            None => BTreeMap::new(),
        };
        let flags = [
            ("func", &self.func),
            ("precond", &self.precond),
            ("method", &self.method),
            ("n", &self.n),
            ("m", &self.m),
            ("tol", &self.tol),
            ("maxit", &self.maxit),
            ("generator", &self.generator),
            ("coeff-file", &self.coeff_file),
            ("eps", &eps.cloned()),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                map.insert(key.to_string(), v.clone());
            }
        }
        ExperimentConfig::from_map(&map)
    }
}

fn output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn finish_solves(reports: &[SolveReport], out: &Option<PathBuf>, strict: bool) -> circprec::Result<ExitCode> {
    print!("{}", format_reports(reports));
    if let Some(path) = out {
        write_reports_csv(reports, BufWriter::new(File::create(path)?))?;
    }
    let failed = reports.iter().filter(|r| !r.converged).count();
    if strict && failed > 0 {
        eprintln!("error: {failed} solve(s) did not converge");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> circprec::Result<ExitCode> {
    match cli.command {
        Command::Solve { problem, out, strict } => {
            let config = problem.config(None)?;
            finish_solves(&Runner::new().solve(&config)?, &out, strict)
        }
        Command::Bench { table, n, tol, maxit, out, strict } => {
            let layout = table_layout(table)?;
            if !(tol > 0.0 && tol.is_finite()) || maxit == Some(0) {
                return Err(Error::InvalidConfig("tol must be positive and maxit at least 1".into()));
            }
            let opts = SolveOptions::new(tol, maxit);
            let sizes: Vec<_> = match n {
                Some(list) => {
                    let wanted = list
                        .split(',')
                        .map(|s| s.trim().parse::<usize>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| Error::InvalidConfig(format!("n = '{list}': {e}")))?;
                    layout.sizes.iter().copied().filter(|(n, _)| wanted.contains(n)).collect()
                }
                None => layout.sizes.clone(),
            };
            if sizes.is_empty() {
                return Err(Error::InvalidConfig(format!("no rows of table {table} match the requested n")));
            }
            finish_solves(&Runner::new().table(table, Some(&sizes), &opts)?, &out, strict)
        }
        Command::Spectrum { problem, eps, out } => {
            let config = problem.config(eps.as_ref())?;
            let reports = Runner::new().spectrum(&config)?;
            print!("{}", format_cluster_reports(&reports));
            let paths = write_reports(&reports, &out)?;
            eprintln!("wrote {} files to {}", paths.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Coeffs { problem, out } => {
            let config = problem.config(None)?;
            let mut w = output(&out)?;
            write_coefficients(&config, &mut w)?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
