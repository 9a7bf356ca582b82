//! `faraday`: run the Faraday-mirror experiments and export their data.
//!
//! Exit status: 0 on success, 2 on a usage or configuration error, 1 on an
//! internal failure (identity check, numerical error, or I/O).

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{ExperimentConfig, FileConfig};

#[derive(Parser, Debug)]
#[command(
    name = "faraday",
    version,
    about = "Faraday-mirror polarization experiments"
)]
struct Cli {
    /// Flat TOML file of config keys; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Pairs per analyzer setting; 0 uses exact probabilities.
    #[arg(long, global = true)]
    shots: Option<u64>,

    /// Output directory.
    #[arg(long, global = true, visible_alias = "output-dir")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check U2- U3 U2+ = i sigma1 and round-trip compensation.
    Identities,
    /// Heralded six-state reflection table.
    SixState(Knobs),
    /// Entanglement-assisted process tomography of the turn.
    Qpt(Knobs),
    /// Ergodic compensation experiment with driven Pockels cells.
    Compensate(Knobs),
}

#[derive(Args, Debug, Default)]
struct Knobs {
    /// mirror or frm.
    #[arg(long)]
    turn: Option<String>,

    /// Depolarizing probability on the returning photon.
    #[arg(long)]
    depolarizing_p: Option<f64>,

    /// pockels_pair or haar.
    #[arg(long)]
    disturbance_mode: Option<String>,

    #[arg(long)]
    steps: Option<u64>,
}

impl Cli {
    fn flags(self) -> (Option<PathBuf>, FileConfig) {
        let (experiment, knobs) = match self.command {
            None => (None, Knobs::default()),
            Some(Command::Identities) => (Some("identities"), Knobs::default()),
            Some(Command::SixState(k)) => (Some("six-state"), k),
            Some(Command::Qpt(k)) => (Some("qpt"), k),
            Some(Command::Compensate(k)) => (Some("compensation"), k),
        };
        let flags = FileConfig {
            experiment: experiment.map(str::to_owned),
            turn: knobs.turn,
            shots: self.shots,
            depolarizing_p: knobs.depolarizing_p,
            disturbance_mode: knobs.disturbance_mode,
            steps: knobs.steps,
            seed: self.seed,
            output_dir: self.out,
        };
        (self.config, flags)
    }
}

fn configure(cli: Cli) -> Result<ExperimentConfig, String> {
    let (path, flags) = cli.flags();
    let file = match path {
        Some(p) => FileConfig::load(&p)?,
        None => FileConfig::default(),
    };
    ExperimentConfig::try_from(file.overlay(flags))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match configure(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("faraday: {e}");
            return ExitCode::from(2);
        }
    };
    let artifacts = match run::run(&config) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("faraday: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = run::write(&config.output_dir, &artifacts) {
        eprintln!("faraday: cannot write {}: {e}", config.output_dir.display());
        return ExitCode::from(1);
    }
    println!("{} -> {}", artifacts.line, config.output_dir.display());
    ExitCode::SUCCESS
}
