//! Command-line front end: build codes, run simulations, check and verify bounds.

mod bundle;
mod commands;
mod config;
mod results;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use crate::commands::{CheckArgs, CheckKind, DecodeArgs, VerifyArgs};
use crate::config::RunConfig;
use crate::results::Grouping;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "hgpprep", version, about = "Single-shot preparation of hypergraph product codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a hypergraph product bundle (alist matrices plus descriptor).
    Construct {
        /// Only `hgp` (self-product) is supported.
        #[arg(long, default_value = "hgp")]
        family: String,
        /// Classical code, e.g. `ldpc:n=18,wc=5,wr=6` or `rep:d=3`.
        #[arg(long)]
        classical: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Compute the classical distance exhaustively.
        #[arg(long)]
        distance: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a simulation grid from a JSON config or manifest.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Defaults to the config, then HGPPREP_WORKERS, then all cores.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Exhaustive code analyses on a bundle.
    Check {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, value_enum)]
        what: CheckKind,
        #[arg(long, default_value_t = 2)]
        t: usize,
        /// `profile`, `cubic` or `linear:ALPHA`.
        #[arg(long, default_value = "profile")]
        f: String,
        #[arg(long, default_value = "rep:3")]
        thickening: String,
        /// Weight cap for distance searches.
        #[arg(long, default_value_t = 8)]
        cap: usize,
        #[arg(long, default_value_t = 1u128 << 32)]
        budget: u128,
    },
    /// Decode one syndrome with BP+OSD.
    Decode {
        /// `.alist` or coordinate-list file.
        #[arg(long)]
        matrix: PathBuf,
        /// File holding the syndrome as a 0/1 string.
        #[arg(long)]
        syndrome: PathBuf,
        #[arg(long, default_value_t = 20)]
        bp_iters: usize,
        #[arg(long, default_value_t = 20)]
        osd_depth: usize,
        #[arg(long, default_value = "full")]
        osd_sweep: String,
        #[arg(long, default_value_t = 0.01)]
        prior: f64,
        /// Decode against `(H | I)` and also print the syndrome repair.
        #[arg(long)]
        single_shot: bool,
    },
    /// Run the exhaustive residual-bound suites on a bundle.
    VerifyBounds {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, default_value = "rep:3")]
        thickening: String,
        /// Confinement cutoff; defaults to d - 1.
        #[arg(long)]
        t: Option<usize>,
        /// Code distance; computed exhaustively when omitted.
        #[arg(long)]
        d: Option<usize>,
        /// Sampled weight-2 syndrome errors for the stage-1 suite.
        #[arg(long, default_value_t = 0)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1u128 << 32)]
        budget: u128,
    },
    /// Turn result CSVs into long-format series for plotting.
    PlotData {
        #[arg(long = "results", required = true)]
        results: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "thickening")]
        group: Grouping,
        /// Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Construct {
            family,
            classical,
            seed,
            distance,
            out,
        } => {
            if family != "hgp" {
                anyhow::bail!("--family {family:?} is not supported (expected hgp)");
            }
            commands::construct(&classical, seed, distance, &out)?;
            Ok(true)
        }
        Command::Simulate { config, out, workers } => {
            let cfg = RunConfig::load(&config)?;
            commands::simulate(&cfg, &out, workers)?;
            Ok(true)
        }
        Command::Check {
            bundle,
            what,
            t,
            f,
            thickening,
            cap,
            budget,
        } => commands::check(&CheckArgs {
            bundle,
            what,
            t,
            f,
            thickening,
            cap,
            budget,
        }),
        Command::Decode {
            matrix,
            syndrome,
            bp_iters,
            osd_depth,
            osd_sweep,
            prior,
            single_shot,
        } => {
            commands::decode(&DecodeArgs {
                matrix,
                syndrome,
                bp_iters,
                osd_depth,
                sweep: osd_sweep,
                prior,
                single_shot,
            })?;
            Ok(true)
        }
        Command::VerifyBounds {
            bundle,
            thickening,
            t,
            d,
            samples,
            seed,
            budget,
        } => commands::verify_bounds(&VerifyArgs {
            bundle,
            thickening,
            t,
            d,
            samples,
            seed,
            budget,
        }),
        Command::PlotData { results, group, out } => {
            commands::plot_data(&results, group, out.as_deref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
