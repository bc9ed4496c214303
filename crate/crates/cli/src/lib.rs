//! Command-line harness: run configuration, snapshot persistence, manifests and report emission.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod snapshot;

use clap::{Parser, Subcommand};

use crate::error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "mcsh", version, about = "Simulation, diagnostics, norms and estimate probes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evolve configured initial data; writes snapshots, a diagnostics CSV and a manifest.
    Simulate(commands::SimulateArgs),
    /// Diagnostics table of stored snapshots.
    Diagnose(commands::DiagnoseArgs),
    /// Fourier-Lebesgue norms of every field of a state.
    Norms(commands::NormsArgs),
    /// Exact exponent bookkeeping of the well-posedness statements.
    Admissible(commands::AdmissibleArgs),
    /// Dilation check of the homogeneous Fourier-Lebesgue norm.
    ScalingTest(commands::ScalingArgs),
    /// Null-form identities, symbol-bound sweeps and the hyperbolic Leibniz rule.
    NullformVerify(commands::NullformArgs),
    /// Delta-restricted convolution integrals against their power-law model.
    DeltaIntegrals(commands::DeltaArgs),
    /// Randomized ratio probe of a bilinear or trilinear estimate.
    Probe(commands::ProbeArgs),
}

/// Environment variable capping the worker threads of sweeps and probes.
pub const THREADS_VAR: &str = "MCSH_THREADS";

/// Sizes the global worker pool from [`THREADS_VAR`], if set.
pub fn init_threads() -> CliResult<()> {
    let Ok(text) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let k: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| CliError::Validation(format!("{THREADS_VAR}={text:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| CliError::Validation(format!("{THREADS_VAR}: {e}")))
}

pub fn run(cli: &Cli) -> CliResult<()> {
    init_threads()?;
    match &cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Diagnose(a) => commands::diagnose(a),
        Command::Norms(a) => commands::norms(a),
        Command::Admissible(a) => commands::admissible_cmd(a),
        Command::ScalingTest(a) => commands::scaling_test(a),
        Command::NullformVerify(a) => commands::nullform_verify(a),
        Command::DeltaIntegrals(a) => commands::delta_integrals(a),
        Command::Probe(a) => commands::probe_cmd(a),
    }
}
