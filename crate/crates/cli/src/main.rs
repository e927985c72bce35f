use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use printsynth_cli::{run, Cli, Outcome};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let mut out = io::stdout().lock();
    let result = run(&cli, &mut input, &mut out);
    let _ = out.flush();
    match result {
        Ok(Outcome::Emitted | Outcome::Finished) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
