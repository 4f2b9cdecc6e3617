use std::process::ExitCode;

use clap::Parser;
use infomech::cli::{run_command, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_command(&cli) {
        Ok(output) => {
            // When CSV streams to stdout, keep it clean and move the human
            // summary to stderr; otherwise the summary goes to stdout.
            if let Some(csv) = &output.csv {
                print!("{csv}");
                eprint!("{}", output.summary);
            } else {
                print!("{}", output.summary);
            }
            if output.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
