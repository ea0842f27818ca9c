use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rydcryst_core::lattice::DEFAULT_DMRG_SEED;

#[derive(Debug, Parser)]
#[command(name = "rydcryst", version, about = "Crystallization of Rydberg dark-state polaritons in 1D")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandKind {
    Params,
    Kparam,
    Lattice,
    Quench,
    Feasibility,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derived polariton quantities and the validity audit.
    Params(Common),
    /// Closed-form K over a Θ sweep with the OD_c each Θ requires.
    Kparam(Common),
    /// Lattice K and g²(z) from DMRG or exact diagonalization.
    Lattice(Common),
    /// Correlation envelopes after the storage protocol.
    Quench(Common),
    /// Go/no-go report for the experimental parameters.
    Feasibility(Common),
}

impl Command {
    pub fn split(&self) -> (CommandKind, &Common) {
        match self {
            Command::Params(c) => (CommandKind::Params, c),
            Command::Kparam(c) => (CommandKind::Kparam, c),
            Command::Lattice(c) => (CommandKind::Lattice, c),
            Command::Quench(c) => (CommandKind::Quench, c),
            Command::Feasibility(c) => (CommandKind::Feasibility, c),
        }
    }
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Params => "params",
            CommandKind::Kparam => "kparam",
            CommandKind::Lattice => "lattice",
            CommandKind::Quench => "quench",
            CommandKind::Feasibility => "feasibility",
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// Named configuration: fig2, fig3, fig4 or theta-crit.
    #[arg(long, conflicts_with = "input")]
    pub preset: Option<String>,
    /// JSON configuration file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Override a configuration value, e.g. `lattice.chi=16` or
    /// `sweep.thetas=[0.5,1.5]`. Applied after the preset or file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Seed for solver start vectors.
    #[arg(long, default_value_t = DEFAULT_DMRG_SEED)]
    pub seed: u64,
    /// Exit with status 3 when the validity audit fails.
    #[arg(long)]
    pub strict: bool,
    /// Report dimensional values in SI units (natural units by default).
    #[arg(long)]
    pub si: bool,
    /// Worker threads for sweeps (default: available cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Suppress the summary printed to stdout.
    #[arg(long, short)]
    pub quiet: bool,
}
