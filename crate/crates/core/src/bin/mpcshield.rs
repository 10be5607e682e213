use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mpcshield::scenario::{parse_scenario, run_scenario};

#[derive(Parser)]
#[command(name = "mpcshield", version, about = "Detect and repair corrupted secret shares")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and print the report.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        /// Write the message transcript to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Overrides the seed from the scenario file.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run { scenario, trace, seed } = cli.command;

    let text = match fs::read_to_string(&scenario) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", scenario.display());
            return ExitCode::from(2);
        }
    };
    let mut s = match parse_scenario(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", scenario.display());
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = seed {
        s.seed = seed;
    }
    let run = match run_scenario(&s) {
        Ok(run) => run,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    print!("{}", run.report);
    if let Some(path) = trace {
        if let Err(e) = fs::write(&path, &run.transcript) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(run.exit_code as u8)
}
