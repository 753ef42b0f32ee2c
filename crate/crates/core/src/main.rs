use clap::Parser;
use gabor_zak::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
