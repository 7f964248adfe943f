use std::io::Read;

use clap::Parser;
use shiftsym_cli::{main_with, Cli};

fn main() {
    let cli = Cli::parse();
    let code = main_with(&cli, || {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    });
    std::process::exit(code);
}
