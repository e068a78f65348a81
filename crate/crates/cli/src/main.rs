use clap::Parser;
use holonomy_cli::{run, Args};

fn main() {
    std::process::exit(run(&Args::parse()));
}
