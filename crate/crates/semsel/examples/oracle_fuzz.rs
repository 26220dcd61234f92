//! Randomized cross-verification: throw seeded random instances at the
//! exact DP and the FPTAS and compare both against full enumeration. Any
//! disagreement prints a seed that regenerates the offending instance.
//!
//!     cargo run --release --example oracle_fuzz [instances]

use semsel::check::{run_check, CheckConfig};

fn main() {
    let instances: usize = std::env::args()
        .nth(1)
        .map(|raw| raw.parse().expect("instance count"))
        .unwrap_or(500);
    let cfg = CheckConfig {
        instances,
        ..CheckConfig::default()
    };
    let report = run_check(&cfg).expect("bounds keep the oracle under its cap");

    if report.passed() {
        println!(
            "{} instances checked (up to {} groups x {} items, eps {}): \
             exact DP matches the oracle, FPTAS within its guarantee",
            report.instances_checked, cfg.max_groups, cfg.max_items, cfg.eps
        );
    } else {
        for violation in &report.violations {
            println!("seed {}: {}", violation.seed, violation.description);
        }
        std::process::exit(1);
    }
}
