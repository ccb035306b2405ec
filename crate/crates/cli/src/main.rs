//! `hypzero`: build hypergeometric polynomials, find their zeros, trace the
//! limiting level curves and compare the two.

mod commands;
mod config;
mod error;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{PlotFiles, Run};
use config::Settings;
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "hypzero", version, about)]
struct Cli {
    /// Run configuration (TOML). Flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(flatten)]
    settings: Settings,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact coefficients: poly_n<n>.txt.
    Poly,
    /// Certified zeros: roots_n<n>.txt.
    Roots,
    /// Curve, branch points, discriminant and the rational-branch check.
    Curve,
    /// Level curves of the harmonic branches: levels/curve_<k>.csv.
    Levels,
    /// Region raster of the maximal branch and the boundary set.
    Regions,
    /// Distance, convergence and clustering reports from existing files.
    Verify,
    /// SVG figure.
    Plot(PlotFiles),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let eff = config::load(cli.config.as_deref(), cli.settings)?;
    match cli.command {
        Command::Poly => commands::poly(Run::new("poly", eff)?),
        Command::Roots => commands::roots(Run::new("roots", eff)?),
        Command::Curve => commands::curve(Run::new("curve", eff)?),
        Command::Levels => commands::levels(Run::new("levels", eff)?),
        Command::Regions => commands::regions(Run::new("regions", eff)?),
        Command::Verify => commands::verify(Run::new("verify", eff)?),
        Command::Plot(files) => commands::plot(Run::new("plot", eff)?, files),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
