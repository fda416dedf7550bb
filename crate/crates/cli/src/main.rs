use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use trunclab_cli::commands::{needs_instance, run_command, Flags, COMMANDS};
use trunclab_cli::instance::{read_instance, Instance};

/// Exact computation with truncated archimedean vector lattices.
#[derive(Debug, Parser)]
#[command(name = "trunclab", version, after_help = after_help())]
struct Cli {
    /// The command to run.
    command: String,
    /// Objects from the instance file the command acts on.
    names: Vec<String>,
    /// Instance file (TOML).
    #[arg(long)]
    file: Option<PathBuf>,
    /// Seed for sampled checks and the suite.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample budget, or cases per suite.
    #[arg(long)]
    cases: Option<usize>,
    /// Print the machine-readable section as JSON.
    #[arg(long)]
    json: bool,
}

fn after_help() -> String {
    format!("Commands: {}", COMMANDS.join(", "))
}

fn input_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !COMMANDS.contains(&cli.command.as_str()) {
        eprintln!("error: unknown command `{}`\n\n{}", cli.command, after_help());
        eprintln!("usage: trunclab <command> [names] --file <path> [--seed N] [--cases N] [--json]");
        return ExitCode::from(2);
    }
    let instance = match (&cli.file, needs_instance(&cli.command)) {
        (Some(path), _) => match read_instance(path) {
            Ok(i) => i,
            Err(e) => return input_error(e),
        },
        (None, true) => return input_error(format!("{} needs --file", cli.command)),
        (None, false) => Instance::default(),
    };
    let flags = Flags {
        seed: cli.seed,
        cases: cli.cases,
    };
    match run_command(&cli.command, &instance, &cli.names, &flags) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.machine_text());
            } else {
                print!("{}", report.human());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => input_error(e),
    }
}
