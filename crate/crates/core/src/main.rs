use std::io::{self, Write};

use clap::Parser;
use nodal::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let stdin = io::stdin();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let status = run(&cli, &mut stdin.lock(), &mut out);
    let _ = out.flush();
    std::process::exit(status);
}
