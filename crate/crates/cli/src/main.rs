use std::io::Write;

use clap::Parser;

fn main() {
    let cli = baut_cli::Cli::parse();
    let out = baut_cli::execute(&cli);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::io::stdout().flush().ok();
    std::process::exit(out.code);
}
