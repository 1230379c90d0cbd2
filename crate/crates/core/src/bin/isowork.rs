use std::io::Write;

use clap::Parser;
use isowork::cli::{self, Cli};

fn main() {
    let args = Cli::parse();
    let env_tol = std::env::var(cli::TOL_ENV).ok();
    let out = cli::run(args, env_tol.as_deref());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
