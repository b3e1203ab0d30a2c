//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.
//! `ACCEPTANCE_VERBOSE=1` prints the compared values as well.

use hciz_cli::config::RunConfig;
use hciz_cli::verify::{run_criterion, Suite};

fn main() {
    let verbose = std::env::var_os("ACCEPTANCE_VERBOSE").is_some();
    let cfg = RunConfig::default();
    let mut failed = 0;
    for id in Suite::All.criteria() {
        let outcome = run_criterion(id, &cfg);
        println!("{}", outcome.summary());
        if verbose || !outcome.passed {
            for line in &outcome.lines {
                println!("    {line}");
            }
        }
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
