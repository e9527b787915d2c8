use std::process::ExitCode;

use clap::Parser;
use revmap_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match revmap_cli::execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("revmap: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
