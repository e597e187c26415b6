//! `hsplit`: split functions on [0, 1] into mean and fluctuation parts.
//!
//! Exit codes: 0 when every reported defect is within tolerance, 2 when at
//! least one is not, 1 on usage or parse errors.

mod commands;
mod format;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hsplit_core::{QuadratureConfig, DEFAULT_TOLERANCE};

pub const QUADRATURE_ENV: &str = "HSPLIT_QUADRATURE";

#[derive(Debug, Parser)]
#[command(
    name = "hsplit",
    version,
    about = "Mean/fluctuation splitting of functions on [0, 1]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecomposeFormat {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decompose one function and report its defects.
    Decompose {
        /// Expression in x, e.g. "exp(x) + sin(3*x)".
        #[arg(long, allow_hyphen_values = true)]
        function: String,
        /// Gauss–Legendre points per panel and panel count.
        #[arg(long, value_name = "ORDER[:PANELS]", env = QUADRATURE_ENV, default_value = "64:1")]
        quadrature: QuadratureConfig,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE, value_parser = parse_tolerance)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = DecomposeFormat::Plain)]
        format: DecomposeFormat,
    },
    /// Check the reference decompositions of x, x^n, e^x, cos x and sin x.
    VerifyPaper {
        #[arg(long, value_name = "ORDER[:PANELS]", env = QUADRATURE_ENV, default_value = "64:1")]
        quadrature: QuadratureConfig,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE, value_parser = parse_tolerance)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Tabulate f, Pf, Qf and psi on an equispaced grid as CSV.
    Table {
        #[arg(long, allow_hyphen_values = true)]
        function: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        points: u32,
        #[arg(long, value_name = "ORDER[:PANELS]", env = QUADRATURE_ENV, default_value = "64:1")]
        quadrature: QuadratureConfig,
    },
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(format!("tolerance must be positive and finite, got {s}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    let mut stdout = std::io::stdout().lock();
    let result = match cli.command {
        Command::Decompose {
            function,
            quadrature,
            tol,
            format,
        } => commands::decompose(&mut stdout, &function, quadrature, tol, format),
        Command::VerifyPaper {
            quadrature,
            tol,
            format,
        } => commands::verify_paper(&mut stdout, quadrature, tol, format),
        Command::Table {
            function,
            points,
            quadrature,
        } => commands::table(&mut stdout, &function, points as usize, quadrature).map(|()| true),
    };

    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) if is_broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain().any(|cause| {
        cause
            .downcast_ref::<std::io::Error>()
            .is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe)
    })
}
