//! `mvop` command-line front end.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use config::WeightConfig;
use mvop::direct::DirectOptions;
use mvop::MvopError;
use output::{render, resolve_format, Format};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Computation(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Computation(_) => 3,
        }
    }
}

impl From<MvopError> for CliError {
    fn from(e: MvopError) -> Self {
        match e {
            MvopError::InvalidInput(_) => CliError::Validation(e.to_string()),
            other => CliError::Computation(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "mvop",
    version,
    about = "Matrix-valued orthogonal polynomials: factorization, equilibrium data, recurrences, asymptotics"
)]
struct Cli {
    /// Weight config JSON: {"r": int, "alpha": [...], "v": [v_0, ..., v_2m]}
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; inferred from the --out extension when absent
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Command tolerance (factorization checks, Newton solves, orthogonality guard)
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads for quadrature reductions (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Spectral factorization of e^{Ax}e^{A*x} and its invariants
    Szego,
    /// Support, density coefficients and Euler-Lagrange constant of v
    Equilibrium,
    /// Recurrence coefficients and norms by discretized Stieltjes
    Direct {
        #[arg(long = "N")]
        n: f64,
        /// Number of degrees (rows 0..nmax-1)
        #[arg(long)]
        nmax: usize,
    },
    /// Errors of the asymptotic predictions against the direct solver
    Compare {
        #[arg(long = "N-list", value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        /// `auto` (N+1 per N) or a fixed degree count
        #[arg(long, default_value = "auto", value_parser = parse_nmax)]
        nmax: NMax,
    },
    /// Determinant of the inner leading term on an equispaced grid in (-1, 1)
    Detgrid {
        /// Effective subdiagonal entries; overrides --config
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alpha: Option<Vec<f64>>,
        #[arg(long = "N")]
        n: f64,
        #[arg(long, default_value_t = 2000)]
        points: usize,
    },
}

#[derive(Debug, Clone, Copy)]
struct NMax(Option<usize>);

fn parse_nmax(s: &str) -> Result<NMax, String> {
    if s == "auto" {
        return Ok(NMax(None));
    }
    s.parse::<usize>().map(|k| NMax(Some(k))).map_err(|_| format!("expected `auto` or an integer, got `{s}`"))
}

fn init_logging() -> Result<(), CliError> {
    let level = match std::env::var("MVOP_LOG") {
        Ok(v) => match v.as_str() {
            "error" | "warn" | "info" | "debug" => v,
            _ => return Err(CliError::Validation(format!("MVOP_LOG must be error|warn|info|debug, got `{v}`"))),
        },
        Err(_) => "warn".to_string(),
    };
    env_logger::Builder::new().parse_filters(&level).format_timestamp(None).init();
    Ok(())
}

fn load(cli: &Cli) -> Result<WeightConfig, CliError> {
    match &cli.config {
        Some(p) => WeightConfig::load(p),
        None => Err(CliError::Validation("--config is required".into())),
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    init_logging()?;
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Validation("--tol must be positive".into()));
        }
    }
    let mut opts = DirectOptions { threads: cli.threads, ..DirectOptions::default() };
    let mut ok = true;
    let report = match &cli.cmd {
        Cmd::Szego => {
            let (rep, pass) = commands::szego(&load(cli)?, cli.tol)?;
            ok = pass;
            rep
        }
        Cmd::Equilibrium => commands::equilibrium(&load(cli)?, cli.tol)?,
        Cmd::Direct { n, nmax } => {
            if let Some(t) = cli.tol {
                opts.orth_tol = t;
            }
            commands::direct(&load(cli)?, *n, *nmax, &opts)?
        }
        Cmd::Compare { n_list, nmax } => commands::compare_cmd(&load(cli)?, n_list, nmax.0, cli.tol, &opts)?,
        Cmd::Detgrid { alpha, n, points } => {
            let cfg = match (&cli.config, alpha) {
                (Some(_), None) => Some(load(cli)?),
                _ => None,
            };
            let a = commands::detgrid_alpha(cfg.as_ref(), alpha.as_deref())?;
            commands::detgrid_cmd(&a, *n, *points)?
        }
    };
    let format = resolve_format(cli.format, cli.out.as_deref(), report.default_format);
    let text = render(&report, format)?;
    match &cli.out {
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))?;
            if matches!(cli.cmd, Cmd::Szego) {
                emit(&commands::szego_summary(&report))?;
            }
        }
        None => emit(&text)?,
    }
    Ok(ok)
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Computation(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: factorization invariants failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
