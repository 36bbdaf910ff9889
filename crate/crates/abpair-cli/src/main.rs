use std::process::exit;

use clap::Parser;

use abpair_cli::{run, Cli, CliError};

fn main() {
    let cli = Cli::parse();
    let mut out = String::new();
    match run(&cli, &mut out) {
        Ok(ok) => {
            print!("{out}");
            exit(if ok { 0 } else { 1 });
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            exit(2);
        }
        Err(CliError::Resource(msg)) => {
            eprintln!("error: {msg}");
            exit(3);
        }
    }
}
