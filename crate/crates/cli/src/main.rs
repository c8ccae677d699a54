use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hfrac::{run, Cli, EXIT_PASS, EXIT_VIOLATION};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((outcome, common)) => {
            let written = match &common.out {
                Some(path) => std::fs::write(path, &outcome.document),
                None => std::io::stdout().write_all(outcome.document.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("hfrac: cannot write output: {e}");
                return ExitCode::from(2);
            }
            print!("{}", outcome.notes);
            let code = if outcome.passed { EXIT_PASS } else { EXIT_VIOLATION };
            if !outcome.passed {
                eprintln!("hfrac: property violation found");
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("hfrac: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
