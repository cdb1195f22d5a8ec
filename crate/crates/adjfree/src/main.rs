use std::process::ExitCode;

use adjfree::cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let summary_to_stderr = cli.artifact_on_stdout();
    match run(cli) {
        Ok(outcome) => {
            if summary_to_stderr {
                eprintln!("{}", outcome.summary);
            } else {
                println!("{}", outcome.summary);
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
