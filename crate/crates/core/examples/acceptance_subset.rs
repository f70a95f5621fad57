//! Runs selected acceptance checks by id (all of them when none are given).
//!
//!     cargo run --release --example acceptance_subset -- 1 5 7

use ehrelay::validation::{run_check, ValidationOptions, CHECK_IDS};

fn main() -> ehrelay::Result<()> {
    let mut ids: Vec<u8> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    if ids.is_empty() {
        ids = CHECK_IDS.to_vec();
    }
    let opts = ValidationOptions::new(1);
    for id in ids {
        println!("{}", run_check(id, &opts)?.line());
    }
    Ok(())
}
