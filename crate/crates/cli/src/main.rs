#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

mod commands;
mod model;
mod output;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use model::Model;

#[derive(Debug)]
pub enum CliError {
    /// Bad input or configuration; exit status 2.
    Usage(String),
    /// The computation ran but could not produce its result; exit status 1.
    Failure(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Failure(format!("{}: {e}", path.display()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Tolerance of the command's pass criterion (each command documents its default).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output directory.
    #[arg(long, global = true, env = "HYPBISECT_OUT", default_value = ".")]
    pub out: PathBuf,
    /// Model used for point input and for rendering.
    #[arg(long, global = true, value_enum, default_value_t = Model::Disk)]
    pub model: Model,
    /// Format of tabular output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

impl RunConfig {
    /// The `--tol` value or `default`. Negative or non-finite values are rejected.
    pub fn tol_or(&self, default: f64) -> Result<f64, CliError> {
        match self.tol {
            None => Ok(default),
            Some(t) if t >= 0.0 && t.is_finite() => Ok(t),
            Some(t) => Err(CliError::Usage(format!(
                "--tol must be a non-negative number, got {t}"
            ))),
        }
    }

    pub fn point(&self, z: [f64; 2]) -> Result<hypbisect::hcore::HPoint, CliError> {
        self.model.to_hyperboloid(z).map_err(CliError::Usage)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "hypbisect",
    version,
    about = "Square hyperbolae and bisectors in H2 and H2 x H2"
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the verification suite and write a JSON report.
    Verify(commands::verify::VerifyArgs),
    /// Trace level sets of a point pair into CSV.
    Trace(commands::trace::TraceArgs),
    /// Render a figure as SVG.
    Plot(commands::plot::PlotArgs),
    /// Recover a pair of points from samples of its bisector.
    Recover(commands::recover::RecoverArgs),
    /// Scan the level-set quotient along a perpendicular to a common axis.
    PhiScan(commands::phi_scan::PhiScanArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => commands::verify::run(&cli.config, a),
        Command::Trace(a) => commands::trace::run(&cli.config, a),
        Command::Plot(a) => commands::plot::run(&cli.config, a),
        Command::Recover(a) => commands::recover::run(&cli.config, a),
        Command::PhiScan(a) => commands::phi_scan::run(&cli.config, a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
