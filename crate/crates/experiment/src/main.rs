// SPDX-License-Identifier: Apache-2.0

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use aoidoi::commands::{cmd_bound, cmd_simulate, cmd_sweep, Output};
use aoidoi::config::Config;
use aoidoi::figures::cmd_figure;
use aoidoi::rows::write_csv;
use aoidoi::{CliError, Result, RunOptions};
use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "aoidoi", version, about = "Delay, AoI and DoI bounds and simulations as CSV")]
struct Cli {
    /// Scenario file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV destination; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON summary destination; stderr when absent.
    #[arg(long, global = true)]
    summary: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Simulated updates per system.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Emit rows for epsilon >= 1 instead of rejecting them.
    #[arg(long, global = true)]
    allow_vacuous: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimized bounds for every parameter value in the config.
    Bound,
    /// Empirical quantiles from simulation.
    Simulate,
    /// Bounds of both policies along a utilization or `w` grid.
    Sweep,
    /// The dataset of one figure (fig3, fig4a..c, fig5, fig6a..c, fig7, fig8).
    Figure { name: String },
}

fn run(cli: Cli) -> Result<()> {
    let opts = RunOptions { seed: cli.seed, samples: cli.samples, allow_vacuous: cli.allow_vacuous };
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let load = || -> Result<Config> {
        let path = cli.config.as_ref().ok_or_else(|| CliError::Usage("--config is required".into()))?;
        Config::load(path)
    };
    let output: Output = match &cli.command {
        Command::Bound => cmd_bound(&load()?, &opts)?,
        Command::Simulate => cmd_simulate(&load()?, &opts)?,
        Command::Sweep => cmd_sweep(&load()?, &opts)?,
        Command::Figure { name } => cmd_figure(name, &opts)?,
    };

    match &cli.out {
        Some(path) => write_csv(BufWriter::new(File::create(path)?), output.rows)?,
        None => write_csv(io::stdout().lock(), output.rows)?,
    }
    if let Some(summary) = output.summary {
        let text = serde_json::to_string_pretty(&summary)?;
        match &cli.summary {
            Some(path) => std::fs::write(path, text + "\n")?,
            None => writeln!(io::stderr(), "{text}")?,
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
