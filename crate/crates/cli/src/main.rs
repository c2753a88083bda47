use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    allotax_cli::run(allotax_cli::Cli::parse())
}
