//! Seeded bond percolation on K_{n,n}: how often does the sample keep the
//! (ε, ε, s) property?

use rug::Rational;
use stableseq::graph::GraphFamily;
use stableseq::percolation::{run_experiment, PercolationConfig, SRule};

fn main() -> stableseq::Result<()> {
    let eps = Rational::from((1, 10));
    for (n, p) in [(12usize, Rational::from((1, 2))), (12, Rational::from((1, 5)))] {
        let cfg = PercolationConfig::new(GraphFamily::CompleteBipartite(n, n), p, 7, 40);
        for rule in [SRule::AlmostRegular, SRule::Fixed(1)] {
            let s = run_experiment(&cfg, &eps, rule)?;
            println!(
                "K_{n},{n} p = {} rule {:<14} success {}/{} (d' = {})",
                s.p, s.s_rule, s.successes, s.trials, s.d_prime
            );
        }
    }
    Ok(())
}
