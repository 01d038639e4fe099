use std::process::ExitCode;

use clap::Parser;
use ghz_decay::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    run(&cli).into()
}
