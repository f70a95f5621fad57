//! Runs every acceptance check and prints one PASS/FAIL line per check.
//!
//! Set `EHRELAY_SEED` to run under another master seed.

use std::process::ExitCode;

use ehrelay::validation::{run_check, ValidationOptions, CHECK_IDS};

fn main() -> ExitCode {
    let seed = std::env::var("EHRELAY_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(20_240_601);
    let opts = ValidationOptions::new(seed);
    println!(
        "acceptance suite, seed {seed}, {} slots per run",
        opts.horizon
    );

    let mut failed = 0;
    for id in CHECK_IDS {
        match run_check(id, &opts) {
            Ok(r) => {
                println!("{}", r.line());
                if !r.passed {
                    failed += 1;
                }
            }
            Err(e) => {
                println!("[FAIL] {id:>2} error: {e}");
                failed += 1;
            }
        }
    }
    println!(
        "{} of {} checks passed",
        CHECK_IDS.len() - failed,
        CHECK_IDS.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
