//! Neighbourhoods, closures and 2-components of even-side subsets of Q_d,
//! and the enumeration-based bounds built on them.

use rug::Rational;
use stableseq::count::{count_by_size, CountOptions};
use stableseq::cube::{scattered_counts, scattered_lower_with_cut, small_set_profile, structure_stats, VertexSet};
use stableseq::graph::hypercube;

fn main() -> stableseq::Result<()> {
    let a = VertexSet::from_vertices(5, [0, 3, 5, 24])?;
    let s = structure_stats(&a)?;
    println!("A = {{0, 3, 5, 24}} in Q_5: |N(A)| = {}, |[A]| = {}, small = {}, 2-components = {}", s.nbhd, s.closure, s.small, s.comps);

    let d = 4;
    println!("scattered subsets of Q_{d} by size: {:?}", scattered_counts(d)?);
    let profile = small_set_profile(d)?;
    let exact = count_by_size(&hypercube(d), &CountOptions::default())?;
    println!("t  lower(f=0)  exact  small-set upper");
    for t in 0..=8u64 {
        let lower = if t > 0 { scattered_lower_with_cut(d, t, 0)?.to_string() } else { "-".into() };
        println!("{t:<2} {lower:>10}  {:>5}  {:>15}", exact.get(t as usize), profile.small_set_upper(t));
    }
    let sum = profile.weight_sum(&Rational::from(1));
    println!("Σ over small A of 2^-|N(A)|: {sum} = {:.6}", sum.to_f64());
    Ok(())
}
