use std::process::ExitCode;

use clap::Parser;
use cloning_core::cli::{run, Cli, EXIT_CONFIG};

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            ExitCode::from(code)
        }
    }
}
