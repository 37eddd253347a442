use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ffhgf_cli::commands::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error of the command
            let _ = writeln!(std::io::stdout().lock(), "{}", out.text.trim_end());
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
