use std::process::ExitCode;

use clap::Parser;
use einf_cli::{command_name, render, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let (report, code) = match run(&cli) {
        Ok(v) => (v, ExitCode::SUCCESS),
        Err(e) => (e.report(name), ExitCode::FAILURE),
    };
    let text = render(&report);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
        }
        None => print!("{text}"),
    }
    code
}
