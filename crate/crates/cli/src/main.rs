use std::fs;
use std::process::ExitCode;

use clap::Parser;
use symcheck::{exit, run, Cli};

fn main() -> ExitCode {
    let outcome = run(Cli::parse());
    let mut code = outcome.exit_code;
    match &outcome.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.document) {
                eprintln!("cannot write {}: {e}", path.display());
                code = exit::INPUT;
            }
            println!("{}", outcome.summary);
        }
        None => {
            eprintln!("{}", outcome.summary);
            print!("{}", outcome.document);
        }
    }
    ExitCode::from(code as u8)
}
