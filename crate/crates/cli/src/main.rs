use std::process::ExitCode;

use clap::Parser;
use shallowperm_cli::{run, Cli};

fn main() -> ExitCode {
    let outcome = run(Cli::parse());
    if let Err(e) = outcome.emit(&mut std::io::stdout().lock(), &mut std::io::stderr().lock()) {
        eprintln!("error: {e}");
        return ExitCode::from(shallowperm_cli::EXIT_DOMAIN);
    }
    ExitCode::from(outcome.exit_code)
}
