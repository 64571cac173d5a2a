//! Exact independent-set sequences for a few graph families.
//!
//! `cargo run --example count_sequences -- qd:4 knn:3,5` (defaults shown below).

use stableseq::count::{count_by_size, CountOptions};
use stableseq::graph::{generate, GraphFamily};

fn main() -> stableseq::Result<()> {
    let mut specs: Vec<String> = std::env::args().skip(1).collect();
    if specs.is_empty() {
        specs = ["qd:4", "knn:3,5", "cycle:10", "aems"].map(String::from).to_vec();
    }
    for spec in &specs {
        let g = generate(&spec.parse::<GraphFamily>()?)?;
        let seq = count_by_size(&g, &CountOptions::default())?;
        let counts: Vec<String> = seq.counts().iter().map(|c| c.to_string()).collect();
        println!("{spec:<10} |V|={:<3} total={:<8} [{}]", g.order(), seq.total(), counts.join(", "));
    }
    Ok(())
}
