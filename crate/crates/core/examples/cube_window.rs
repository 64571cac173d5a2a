//! Central estimate of i_t(Q_d) and its error window across the upper range,
//! plus the scanned thresholds of the closing inequalities.

use rug::Integer;
use stableseq::estimates::{closing_thresholds, half_order, EstimateEngine};
use stableseq::numeric::float_string;

fn main() -> stableseq::Result<()> {
    let engine = EstimateEngine::default();
    let d = 40;
    let n = half_order(d);
    println!("d = {d}, upper range starts at t/2^(d-1) = {}", float_string(&engine.upper_range_start(d), 6));
    for num in [50u32, 55, 60, 70, 90, 99] {
        let t = Integer::from(&n * num) / 100u32;
        let w = engine.cube_window(d, &t)?;
        let show = |v: &Option<rug::Float>| v.as_ref().map(|x| float_string(x, 12)).unwrap_or_else(|| "n/a".into());
        println!(
            "t = {num}% of 2^(d-1): {:?}, log2 estimate {}, window [{}, {}]",
            w.range,
            float_string(&w.central_log2, 12),
            show(&w.e1_lower),
            show(&w.e2_upper)
        );
    }
    for th in closing_thresholds(2, 200) {
        match th.d0 {
            Some(d0) => println!("{}: holds for every d in [{d0}, {}]", th.name, th.hi),
            None => println!("{}: fails at d = {}", th.name, th.hi),
        }
    }
    Ok(())
}
