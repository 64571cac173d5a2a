//! Shape checks on sequences: unimodality, s-step monotonicity, the
//! (β, γ, s) property and the decrease over the final third.

use rug::{Integer, Rational};
use stableseq::count::{count_by_size, CountOptions};
use stableseq::graph::{aems, complete_bipartite};
use stableseq::seq::{check_final_third, check_property_bgs, check_sstep, check_unimodal, Direction};

fn main() -> stableseq::Result<()> {
    let fixture = count_by_size(&aems(), &CountOptions::default())?;
    let u = check_unimodal(fixture.counts())?;
    println!("AEMS fixture {:?}: unimodal = {}, witness {:?}", fixture.counts(), u.holds, u.witness);

    let seq = count_by_size(&complete_bipartite(6, 6), &CountOptions::default())?;
    println!("K_6,6: {:?}", seq.counts().iter().map(Integer::to_string).collect::<Vec<_>>());
    println!("  unimodal: {}", check_unimodal(seq.counts())?.holds);
    println!("  final third: {}", check_final_third(seq.counts())?.holds);
    let step = check_sstep(seq.counts(), Direction::Increasing, 0, 3, 2)?;
    println!("  2-step increasing on [0, 3]: {}", step.holds);
    let eps = Rational::from((1, 10));
    let bgs = check_property_bgs(seq.counts(), 6, &eps, &eps, 1)?;
    println!(
        "  property (1/10, 1/10, 1): {} (increasing on [{}, {}], decreasing on [{}, {}])",
        bgs.holds, bgs.increasing.lo, bgs.increasing.hi, bgs.decreasing.lo, bgs.decreasing.hi
    );

    let zigzag: Vec<Integer> = [1, 5, 3, 6, 2].into_iter().map(Integer::from).collect();
    let r = check_sstep(&zigzag, Direction::Increasing, 0, 4, 1)?;
    println!("1,5,3,6,2 increasing: {} witness {:?}", r.holds, r.witness);
    Ok(())
}
