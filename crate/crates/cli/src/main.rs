use std::io::Write;
use std::process::ExitCode;

use abqt_cli::{execute, output_path, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match output_path(&cli) {
        Some(path) => std::fs::write(&path, &outcome.text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .lock()
            .write_all(outcome.text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if outcome.exit_code == 2 {
        eprintln!("verification failed");
    }
    ExitCode::from(outcome.exit_code as u8)
}
