use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use pointnls::config::{Command, JobConfig};
use pointnls::runner::{execute, exit_code, RunManifest};
use pointnls::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Groundstate,
    Evolve,
    BlowupDemo,
    VirialScan,
    Inequalities,
    Spectrum,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Groundstate => Command::Groundstate,
            Cmd::Evolve => Command::Evolve,
            Cmd::BlowupDemo => Command::BlowupDemo,
            Cmd::VirialScan => Command::VirialScan,
            Cmd::Inequalities => Command::Inequalities,
            Cmd::Spectrum => Command::Spectrum,
        }
    }
}

/// Radial NLS with a point interaction: spectrum, ground states, evolution,
/// blow-up and inequality checks.
///
/// Exit codes: 0 success, 1 numerical failure, 2 blow-up detected,
/// 3 configuration error.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    command: Cmd,
    /// Job file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, default `out/<command>`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the randomised families.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `key=value`, applied after the job file; repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    let command = Command::from(cli.command);
    let text = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("cannot read {}: {e}", path.display());
                return ExitCode::from(3);
            }
        },
        None => String::new(),
    };
    let out = cli
        .out
        .unwrap_or_else(|| PathBuf::from("out").join(command.name()));
    let result = JobConfig::parse_with_overrides(command, &text, &cli.overrides).and_then(|job| {
        let manifest = RunManifest::new(&job, cli.config.as_deref(), &out, cli.seed)?;
        execute(&job, &manifest)
    });
    match &result {
        Ok(outcome) => eprintln!("{command}: {outcome:?}, outputs in {}", out.display()),
        Err(Error::Config { line, msg }) => eprintln!("config error (line {line}): {msg}"),
        Err(e) => eprintln!("{command} failed: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
