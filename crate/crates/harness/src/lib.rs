//! Command-line harness around `rso-core`: runs, stepsize sweeps, lemma
//! verification and certificates for the hard instance and test functions.
//!
//! Every invocation writes into `<out>/<command>-<hash>/`, where the hash is
//! taken over the canonical config, and never overwrites an earlier run.

pub mod certify;
pub mod error;
pub mod lemmas;
pub mod output;
pub mod run;
pub mod sweep;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use error::{HarnessError, Result};

/// Where an invocation wrote its files and whether all its checks passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub dir: PathBuf,
    pub ok: bool,
}

#[derive(Debug, Parser)]
#[command(name = "rso", version, about = "Optimization experiments under (L0,L1)-smoothness")]
pub struct Cli {
    /// Base directory for outputs.
    #[arg(long, global = true, default_value = "rso-out")]
    pub out: PathBuf,
    /// Worker threads for sweeps and lemma grids (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Overrides the seed in the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one optimizer on one objective.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Grid over stepsize multipliers, optimizers and seeds.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Build a hard instance and check the iteration lower bound on it.
    CertifyLowerBound {
        #[arg(long)]
        config: PathBuf,
    },
    /// Evaluate the summation lemmas on a grid (default grids without a config).
    VerifyLemmas {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Sample-check that an objective satisfies its declared constants.
    CertifySmoothness {
        #[arg(long)]
        config: PathBuf,
    },
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    if cli.jobs == Some(0) {
        return Err(HarnessError::Config("--jobs must be >= 1".into()));
    }
    match &cli.command {
        Command::Run { config } => run::cmd_run(config, &cli.out, cli.seed),
        Command::Sweep { config } => sweep::cmd_sweep(config, &cli.out, cli.seed, cli.jobs),
        Command::CertifyLowerBound { config } => certify::cmd_certify_lower_bound(config, &cli.out, cli.seed),
        Command::VerifyLemmas { config } => lemmas::cmd_verify_lemmas(config.as_deref(), &cli.out, cli.jobs),
        Command::CertifySmoothness { config } => certify::cmd_certify_smoothness(config, &cli.out, cli.seed),
    }
}
