use clap::Parser;
use hardy_poafd::cli::{main_with, Cli};

fn main() {
    std::process::exit(main_with(Cli::parse()));
}
