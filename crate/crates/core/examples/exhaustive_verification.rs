//! Enumerates every blow-up sequence up to a level (default 5), resolves
//! each isomorphism class and checks that only A and D singularities occur
//! and that non-main fibres reduce to main fibres of lower level.
//!
//! cargo run --release --example exhaustive_verification -- 6

use std::time::Instant;

use conic_fibers::enumeration::{enumerate_levels, verify_classification, EnumerationOptions};

fn main() {
    let max: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("level must be a number"))
        .unwrap_or(5);

    let start = Instant::now();
    let levels = enumerate_levels(max, &EnumerationOptions::default()).expect("level within cap");
    println!("level  sequences  classes");
    for l in &levels {
        println!(
            "{:>5}  {:>9}  {:>7}",
            l.level,
            l.raw_count,
            l.deduped_count()
        );
    }

    let report = verify_classification(max).expect("level within cap");
    for t in &report.levels {
        println!(
            "\nlevel {} ({} main, {} non-main)",
            t.level, t.main, t.non_main
        );
        for (signature, count) in &t.outcomes {
            println!("  {count:>4}  {signature}");
        }
    }
    for f in report.violations.iter().chain(&report.claim_failures) {
        println!("FAILURE level {} via\n{}  {}", f.level, f.witness, f.reason);
    }
    println!(
        "\n{} violations, {} claim failures, {:.2?}",
        report.violations.len(),
        report.claim_failures.len(),
        start.elapsed()
    );
}
