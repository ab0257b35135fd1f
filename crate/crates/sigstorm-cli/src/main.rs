//! `sigstorm` — signalling-load calculator for a dual-band radio resource
//! state machine with paging, inactivity timers, and synthetic burst traffic.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 numerical
//! failure, 4 verification mismatch.

mod commands;
mod csvout;
mod runspec;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// One failure, tagged with its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or an invalid configuration (exit 2). One line per problem.
    Config(Vec<String>),
    /// The numeric machinery could not produce an answer (exit 3).
    Numerical(String),
    /// Independent implementations disagree (exit 4).
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Verification(_) => 4,
        }
    }

    fn lines(&self) -> Vec<String> {
        match self {
            CliError::Config(v) => v.clone(),
            CliError::Numerical(m) | CliError::Verification(m) => vec![m.clone()],
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PresetName {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl PresetName {
    fn as_str(self) -> &'static str {
        match self {
            PresetName::Fig2 => "fig2",
            PresetName::Fig3 => "fig3",
            PresetName::Fig4 => "fig4",
            PresetName::Fig5 => "fig5",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PchMode {
    On,
    Off,
}

/// Signalling-load calculator: stationary analysis, worst-case burst
/// optimization, seeded simulation, and population storm projection.
#[derive(Parser)]
#[command(name = "sigstorm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Model parameters and message costs from an INI-style file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Built-in scenario with its sweep recipe.
    #[arg(long, global = true, value_enum, value_name = "NAME")]
    preset: Option<PresetName>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Seed for randomized subcommands (simulate, verify).
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    seed: u64,

    /// Sweep axis, PARAM=lo:hi:points[:log].
    #[arg(long, global = true, value_name = "SPEC")]
    sweep: Option<String>,

    /// Override the paging-channel mode from the config or preset.
    #[arg(long, global = true, value_enum, value_name = "on|off")]
    pch: Option<PchMode>,

    /// Print the effective configuration in config-file syntax and exit.
    #[arg(long, global = true)]
    dump_config: bool,

    /// Independent simulation replications (simulate; verify floors this
    /// at 10 to keep its fixed z threshold calibrated).
    #[arg(long, global = true, default_value_t = 10, value_name = "N")]
    replications: usize,

    /// Simulated seconds per replication (simulate, verify).
    #[arg(long, global = true, default_value_t = 1e6, value_name = "SECONDS")]
    horizon: f64,

    /// Population size for storm totals.
    #[arg(long, global = true, default_value_t = 10_000, value_name = "N")]
    users: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the stationary distribution, one row per state.
    Solve,
    /// Print per-user radio and core message rates with the occupancy split.
    Loads,
    /// Print closed-form worst-case burst rates and their intermediates.
    Optimize,
    /// Evaluate loads over a parameter grid (--sweep or the preset recipe).
    Sweep,
    /// Run the seeded event-driven simulator and print confidence rows.
    Simulate,
    /// Project totals for a population with a misbehaving fraction.
    Storm,
    /// Cross-check the closed forms against the numeric solver and simulator.
    Verify,
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            CliError::Config(vec![format!("cannot write {}: {e}", path.display())])
        }),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                Ok(()) => Ok(()),
                // A closed pipe (e.g. `| head`) truncates output by design.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(CliError::Config(vec![format!("cannot write stdout: {e}")])),
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    // `fraction` is sweepable only where it means something.
    let sweep_extra: &[&str] = match cli.command {
        Some(Command::Storm) => &["fraction"],
        _ => &[],
    };
    let mut preset = cli.preset;
    if matches!(cli.command, Some(Command::Verify)) && cli.config.is_none() && preset.is_none() {
        // verify generates its own parameter sets; standalone it runs
        // against the standard cost table.
        preset = Some(PresetName::Fig2);
    }
    let spec = runspec::resolve(
        cli.config,
        preset.map(|p| p.as_str().to_string()),
        cli.sweep,
        sweep_extra,
        cli.pch.map(|m| matches!(m, PchMode::On)),
        cli.out,
        cli.seed,
        cli.replications,
        cli.horizon,
        cli.users,
    )?;
    if cli.dump_config {
        return emit(&spec.out, &commands::dump(&spec));
    }
    let Some(command) = cli.command else {
        return Err(CliError::Config(vec![
            "missing subcommand (try `sigstorm --help`)".to_string(),
        ]));
    };
    let output = match command {
        Command::Solve => commands::solve(&spec)?,
        Command::Loads => commands::loads(&spec)?,
        Command::Optimize => commands::optimize(&spec)?,
        Command::Sweep => commands::sweep(&spec)?,
        Command::Simulate => commands::simulate_cmd(&spec)?,
        Command::Storm => commands::storm(&spec)?,
        Command::Verify => match commands::verify(&spec) {
            Ok(report) => report,
            Err(CliError::Verification(report)) => {
                // The report is still the run's output; the exit code carries
                // the failure.
                emit(&spec.out, &report)?;
                return Err(CliError::Verification(
                    "verification mismatch; see the report rows marked `fail`".to_string(),
                ));
            }
            Err(other) => return Err(other),
        },
    };
    emit(&spec.out, &output)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            for line in err.lines() {
                eprintln!("error: {line}");
            }
            ExitCode::from(err.exit_code())
        }
    }
}
