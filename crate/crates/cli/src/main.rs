use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use sakai_cli::{run, write_atomically, Cli, EXIT_FAIL};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let written = match &cli.out {
        Some(path) => write_atomically(path, &outcome.body),
        None => std::io::stdout().write_all(outcome.body.as_bytes()),
    };
    let code = match written {
        Ok(()) => outcome.exit_code,
        Err(e) => {
            eprintln!("sakai: cannot write output: {e}");
            EXIT_FAIL
        }
    };
    if code != 0 {
        eprintln!("sakai: {} exited with status {code}", cli.command.name());
    }
    ExitCode::from(code as u8)
}
