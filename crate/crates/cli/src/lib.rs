//! Command-line driver: one TOML configuration per run, one subcommand per
//! product (soliton, audit, simulate, experiment, convergence).

pub mod commands;
pub mod config;

use clap::{Parser, Subcommand};
use std::path::PathBuf;

pub use commands::DriftExceeded;
pub use config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "wavecharge", version, about = "Scalar field coupled to a relativistic charge")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Soliton field slice and energies.
    Soliton(Args),
    /// Velocity sweep of the soliton energy audit.
    Audit(Args),
    /// Trajectory with energy monitors.
    Simulate(Args),
    /// Counterexample experiment (part_i or part_ii).
    Experiment(Args),
    /// Energy drift under step refinement.
    Convergence(Args),
}

#[derive(Debug, Clone, clap::Args)]
pub struct Args {
    /// TOML configuration; omitted keys take their defaults.
    #[arg(short, long)]
    pub config: Option<PathBuf>,
}

impl Command {
    pub fn args(&self) -> &Args {
        match self {
            Command::Soliton(a)
            | Command::Audit(a)
            | Command::Simulate(a)
            | Command::Experiment(a)
            | Command::Convergence(a) => a,
        }
    }
}

/// Runs a subcommand with an already loaded configuration.
pub fn run(command: &Command, cfg: &RunConfig) -> anyhow::Result<()> {
    match command {
        Command::Soliton(_) => commands::cmd_soliton(cfg),
        Command::Audit(_) => commands::cmd_audit(cfg),
        Command::Simulate(_) => commands::cmd_simulate(cfg),
        Command::Experiment(_) => commands::cmd_experiment(cfg),
        Command::Convergence(_) => commands::cmd_convergence(cfg),
    }
}

pub fn load_config(args: &Args) -> anyhow::Result<RunConfig> {
    match &args.config {
        Some(path) => RunConfig::load(path),
        None => Ok(RunConfig::default()),
    }
}
