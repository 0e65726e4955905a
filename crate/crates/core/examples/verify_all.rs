//! Run every suite for one (q, n) from library code and print the JSON report.
//!
//!     cargo run --release --example verify_all -- --q 3 --n 2

use clap::Parser;
use lubin_tate::cli::{execute, Cli, Output};

fn main() {
    let mut argv = vec!["lubin-tate".to_string(), "verify-all".to_string()];
    argv.extend(std::env::args().skip(1));
    let cli = Cli::try_parse_from(argv).unwrap_or_else(|e| e.exit());
    match execute(&cli) {
        Ok((Output::Report(r), _)) => {
            for c in &r.checks {
                println!("{:<4} {}", c.status, c.name);
            }
            println!("all passed: {}", r.passed());
        }
        Ok((Output::Csv(text), _)) => print!("{text}"),
        Err(e) => eprintln!("error: {e}"),
    }
}
