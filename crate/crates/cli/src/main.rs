use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ufh_cli::{cmd_basis, cmd_expansion, cmd_generate, cmd_tree_iso, cmd_triad, CliError, RunConfig};

#[derive(Parser)]
#[command(name = "ufh", version, about = "Uniformly finite homology on graph windows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout (overrides the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the circuit enumeration cap.
    #[arg(long, global = true)]
    max_circuits: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Window statistics and edge lists.
    Generate,
    /// Ends, large circuits and expansion evidence with a verdict.
    Triad,
    /// Bip basis round trips, tameness and the comb table.
    TreeIso,
    /// Filtered cycle bases per window.
    Basis,
    /// Cheeger constants, flow witnesses and filling probes.
    Expansion,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let path = cli.config.ok_or_else(|| CliError::Config("--config is required".into()))?;
    let mut config = RunConfig::from_toml(&std::fs::read_to_string(path)?)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(cap) = cli.max_circuits {
        config.max_circuits = cap;
    }
    if cli.out.is_some() {
        config.out = cli.out;
    }
    config.validate()?;
    let report = match cli.command {
        Command::Generate => cmd_generate(&config)?,
        Command::Triad => cmd_triad(&config)?,
        Command::TreeIso => cmd_tree_iso(&config)?,
        Command::Basis => cmd_basis(&config)?,
        Command::Expansion => cmd_expansion(&config)?,
    };
    let text = report.to_json()?;
    match &config.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
