use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use nondegen_cli::commands::EXIT_INVALID;
use nondegen_cli::{run, Cli, JobSpec};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INVALID as u8),
            };
        }
    };
    let job = JobSpec::from_command(cli.command);
    let outcome = run(&job);

    if !outcome.stdout.is_empty() {
        let written = match &job.out {
            Some(path) => std::fs::write(path, &outcome.stdout),
            None => std::io::stdout().write_all(outcome.stdout.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("error: writing output: {e}");
            return ExitCode::from(EXIT_INVALID as u8);
        }
    }
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.code as u8)
}
