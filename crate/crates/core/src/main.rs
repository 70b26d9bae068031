use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use multiapolar::cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = report.to_json();
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => {
            // ignore a closed pipe
            let _ = writeln!(std::io::stdout(), "{text}");
        }
    }
    for c in &report.checks {
        eprintln!("{:<22} {:?}", c.name, c.status);
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
