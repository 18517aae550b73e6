use clap::Parser;
use kowalewski::cli::{run, Cli};

fn main() {
    std::process::exit(run(&Cli::parse()));
}
