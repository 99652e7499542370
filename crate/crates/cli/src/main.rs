//! `geophase`: parameter sweeps, line cuts, full-dynamics runs and the
//! quadrupole contrast case for non-Abelian adiabatic holonomies in a tripod atom.
//!
//! Exit codes: 0 success, 2 config error, 3 convergence failure, 4 I/O error.

mod adiabatic;
mod config;
mod debug;
mod error;
mod nmr;
mod output;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "geophase", version, about = "Non-Abelian adiabatic holonomy experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand. Flags override values from `--config`.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output path, `-` for standard output.
    #[arg(long)]
    pub out: Option<String>,
    /// Grid points per loop for holonomy transport.
    #[arg(long)]
    pub steps: Option<usize>,
    /// `key = value` config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// P, P' and P_d over an (alpha, beta) grid.
    Sweep(sweep::SweepArgs),
    /// P, P' and P_d along beta at fixed alpha.
    Linecut(sweep::LinecutArgs),
    /// Full Schrodinger dynamics over the composite loop pair.
    Adiabatic(adiabatic::AdiabaticArgs),
    /// Spin-3/2 quadrupole checks.
    Nmr(nmr::NmrArgs),
    /// Single-loop holonomy dump.
    Holonomy(debug::HolonomyArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(a) => sweep::sweep(a),
        Command::Linecut(a) => sweep::linecut(a),
        Command::Adiabatic(a) => adiabatic::run(a),
        Command::Nmr(a) => nmr::run(a),
        Command::Holonomy(a) => debug::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("geophase: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
