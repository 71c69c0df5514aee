//! `casimir`: friction forces, spectra, trajectory diagnostics, literature
//! comparison and parameter sweeps from the command line.
//!
//! Exactly one JSON or CSV document goes to stdout; warnings and errors go
//! to stderr. Exit codes: 0 ok, 2 invalid input, 3 numerical failure.

mod compare;
mod config;
mod dissipate;
mod force;
mod output;
mod spectrum;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{CliError, RunConfig};
use output::{Meta, Outcome};

#[derive(Debug, Parser)]
#[command(name = "casimir", version, about = "Casimir friction between sliding dielectric plates")]
struct Cli {
    /// JSON file with the same keys as the flags; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Add run metadata (version, timing) to the output.
    #[arg(long, global = true)]
    meta: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Friction force per unit area.
    Force {
        #[command(flatten)]
        run: RunConfig,
    },
    /// Permittivity, Im R and spectral density on a log grid (CSV).
    Spectrum {
        #[command(flatten)]
        run: RunConfig,
        #[command(flatten)]
        grid: spectrum::SpectrumArgs,
    },
    /// Finite-τ trajectory transform profiles and δ-limit convergence.
    Dissipate {
        #[command(flatten)]
        run: RunConfig,
        #[command(flatten)]
        args: dissipate::DissipateArgs,
    },
    /// Consistency report against the literature closed forms.
    Compare {
        #[command(flatten)]
        run: RunConfig,
    },
    /// Force over a lin or log grid of one parameter (CSV).
    Sweep {
        #[command(flatten)]
        run: RunConfig,
        #[command(flatten)]
        args: force::SweepArgs,
    },
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let meta = cli.meta.then(Meta::start);
    let file = cli.config.as_deref();
    match &cli.command {
        Command::Force { run } => force::cmd_force(&RunConfig::load(file, run)?, meta.as_ref()),
        Command::Spectrum { run, grid } => spectrum::cmd_spectrum(&RunConfig::load(file, run)?, grid),
        Command::Dissipate { run, args } => dissipate::cmd_dissipate(&RunConfig::load(file, run)?, args, meta.as_ref()),
        Command::Compare { run } => compare::cmd_compare(&RunConfig::load(file, run)?, meta.as_ref()),
        Command::Sweep { run, args } => force::cmd_sweep(&RunConfig::load(file, run)?, args),
    }
    .map(|mut out| {
        if let (Some(m), true) = (&meta, out.is_csv) {
            out.warnings.push(format!("meta: {}", m.to_json()));
        }
        out
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(out.exit_code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
