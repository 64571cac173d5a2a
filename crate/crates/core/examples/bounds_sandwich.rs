//! Per-size upper and lower bounds next to the exact counts, plus the
//! partition-function bounds at a few activities.

use rug::Rational;
use stableseq::bounds::BoundsEngine;
use stableseq::count::{count_by_size, CountOptions};
use stableseq::graph::{bipartition, hypercube};
use stableseq::numeric::float_string;

fn main() -> stableseq::Result<()> {
    let g = hypercube(4);
    let b = bipartition(&g)?;
    let seq = count_by_size(&g, &CountOptions::default())?;
    let engine = BoundsEngine::default();
    let table = engine.bound_table(&g, &b, &Rational::from(4), Some(&seq))?;

    println!("Q_4, degree 4: log2 bounds per size");
    for row in &table.rows {
        let f = |v: &Option<rug::Float>| v.as_ref().map(|x| float_string(x, 8)).unwrap_or_else(|| "-".into());
        println!("t={:<2} {:>10} <= {:>10} <= {:>10}", row.t, f(&row.lower_log2), f(&row.exact_log2), f(&row.upper_log2));
    }
    println!("violations: {}", table.violations().len());

    for lambda in ["1/2", "1", "3"] {
        let lambda: Rational = lambda.parse().expect("literal");
        let exact = seq.eval(&lambda);
        let bound = engine.regular_partition_bound(16, 4, &lambda)?;
        println!(
            "λ = {lambda}: P = {} ({:.4} bits), regular bound {} bits",
            exact,
            exact.to_f64().log2(),
            float_string(&bound, 8)
        );
    }
    Ok(())
}
