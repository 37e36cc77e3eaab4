//! One line per acceptance criterion; exits nonzero if any fails.
//!
//! `ACCEPTANCE_SEED` overrides the seed of the randomized criteria.

use diffcoh::suite::{run_criterion, CRITERIA, DEFAULT_SEED};

fn main() {
    let seed = std::env::var("ACCEPTANCE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    println!("acceptance suite, seed {seed}");
    let mut failed = 0;
    for &(id, _) in &CRITERIA {
        let outcome = run_criterion(id, seed);
        println!("{}", outcome.line());
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
