use std::process::ExitCode;

use clap::Parser;
use dp_rejection::cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            for m in &outcome.messages {
                println!("{m}");
            }
            for f in &outcome.files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::from(outcome.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
