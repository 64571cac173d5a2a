//! Runs the self-check criteria and prints one line per criterion.
//!
//! `cargo run --example verify` runs the full suite; pass `small` for the quick one.

use std::time::Instant;

use stableseq::verify::{run_criterion, suite_members, Suite};

fn main() {
    let suite: Suite = std::env::args().nth(1).as_deref().unwrap_or("full").parse().expect("suite");
    for id in suite_members(suite) {
        let start = Instant::now();
        match run_criterion(id) {
            Ok(o) => println!(
                "{:>2} {} {:<40} {} ({:.1?})",
                o.id,
                if o.passed { "PASS" } else { "FAIL" },
                o.title,
                o.detail,
                start.elapsed()
            ),
            Err(e) => println!("{id:>2} ERROR {e}"),
        }
    }
}
