//! Exact ratio i_t(Q_d) / (2 C(2^(d-1), t)) against the predicted limit
//! exp{e^(-2g)/2}, g = d (t/2^(d-1) - 1/2).

use rug::Integer;
use stableseq::count::{count_by_size, CountOptions};
use stableseq::graph::hypercube;
use stableseq::seq::{transition_g, transition_limit, transition_ratio};

fn main() -> stableseq::Result<()> {
    let d = 5;
    let seq = count_by_size(&hypercube(d), &CountOptions::default())?;
    println!("  t        g     ratio   predicted");
    for t in 6..=16u64 {
        let ratio = transition_ratio(d, t, &seq.get(t as usize))?.to_f64().exp2();
        let g = transition_g(d, &Integer::from(t));
        println!("{t:>3} {:>8} {ratio:>9.4} {:>11.4}", g.to_string(), transition_limit(&g).to_f64());
    }
    Ok(())
}
