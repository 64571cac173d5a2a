//! Shape checks on integer sequences: s-step monotonicity, property
//! `(beta, gamma, s)`, unimodality, the decreasing final third, and the
//! hypercube transition ratio around `t = 2^(d-2)`.

use rug::float::Constant;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{binomial, ceil_rational, floor_rational, log2_rational, Side, DEFAULT_PRECISION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Non-strict comparisons follow the definition; strict mode demands
/// `a_i < a_j` (increasing) or `a_i > a_j` (decreasing).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Strictness {
    #[default]
    NonStrict,
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotonicityReport {
    pub kind: Direction,
    pub lo: usize,
    pub hi: usize,
    pub s: usize,
    pub strictness: Strictness,
    pub holds: bool,
    /// Lexicographically first violating pair `(i, j)`, `j - i >= s`.
    pub witness: Option<(usize, usize)>,
}

impl MonotonicityReport {
    fn vacuous(kind: Direction, lo: usize, hi: usize, s: usize, strictness: Strictness) -> Self {
        Self {
            kind,
            lo,
            hi,
            s,
            strictness,
            holds: true,
            witness: None,
        }
    }
}

fn violates(kind: Direction, strictness: Strictness, ai: &Integer, aj: &Integer) -> bool {
    match (kind, strictness) {
        (Direction::Increasing, Strictness::NonStrict) => ai > aj,
        (Direction::Increasing, Strictness::Strict) => ai >= aj,
        (Direction::Decreasing, Strictness::NonStrict) => ai < aj,
        (Direction::Decreasing, Strictness::Strict) => ai <= aj,
    }
}

pub fn check_sstep(seq: &[Integer], kind: Direction, lo: usize, hi: usize, s: usize) -> Result<MonotonicityReport> {
    check_sstep_with(seq, kind, lo, hi, s, Strictness::NonStrict)
}

/// Checks `a_i <= a_j` (or `>=`) for all `lo <= i <= j <= hi` with `j - i >= s`.
///
/// Runs in `O(hi - lo)`: a suffix minimum (maximum for the decreasing kind)
/// identifies the first `i` that takes part in any violation, then a forward
/// scan finds its first partner `j`.
pub fn check_sstep_with(
    seq: &[Integer],
    kind: Direction,
    lo: usize,
    hi: usize,
    s: usize,
    strictness: Strictness,
) -> Result<MonotonicityReport> {
    if lo > hi || hi >= seq.len() {
        return Err(Error::MalformedInterval { lo, hi, len: seq.len() });
    }
    if s == 0 {
        return Err(Error::InvalidParameter("step size must be at least 1".into()));
    }
    let mut report = MonotonicityReport::vacuous(kind, lo, hi, s, strictness);
    if s > hi - lo {
        return Ok(report);
    }
    // extreme[k - lo] = index in [k, hi] of the value most likely to violate
    let mut extreme = vec![hi; hi - lo + 1];
    for k in (lo..hi).rev() {
        let best = extreme[k + 1 - lo];
        let better = match kind {
            Direction::Increasing => seq[k] < seq[best],
            Direction::Decreasing => seq[k] > seq[best],
        };
        extreme[k - lo] = if better { k } else { best };
    }
    for i in lo..=hi - s {
        let cand = extreme[i + s - lo];
        if violates(kind, strictness, &seq[i], &seq[cand]) {
            let j = (i + s..=hi)
                .find(|&j| violates(kind, strictness, &seq[i], &seq[j]))
                .expect("extreme element violates");
            report.holds = false;
            report.witness = Some((i, j));
            break;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyBgs {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub beta: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub gamma: Rational,
    pub s: usize,
    pub n: usize,
    pub holds: bool,
    pub increasing: MonotonicityReport,
    pub decreasing: MonotonicityReport,
}

/// Property `(beta, gamma, s)` for the sequence of a bipartite graph on `2n`
/// vertices: s-step increase on `[beta n, (1-gamma) n/2]` and s-step decrease
/// on `[(1+gamma) n/2, (1-beta) n]`. Endpoints are rounded inward; an interval
/// that rounds to nothing holds vacuously.
pub fn check_property_bgs(seq: &[Integer], n: usize, beta: &Rational, gamma: &Rational, s: usize) -> Result<PropertyBgs> {
    for (name, v) in [("beta", beta), ("gamma", gamma)] {
        if *v < 0 || *v >= 1 {
            return Err(Error::InvalidParameter(format!("{name} = {v} outside [0, 1)")));
        }
    }
    let alpha = seq.len().saturating_sub(1);
    if seq.is_empty() || alpha < n {
        return Err(Error::Unbalanced { alpha, n });
    }
    let nn = Rational::from(n);
    let to_usize = |i: Integer| i.to_usize().expect("endpoint within sequence");
    let inc_lo = to_usize(ceil_rational(&Rational::from(beta * &nn)));
    let inc_hi = to_usize(floor_rational(&Rational::from((1 - gamma.clone()) * &nn / 2u32)));
    let dec_lo = to_usize(ceil_rational(&Rational::from((1 + gamma.clone()) * &nn / 2u32)));
    let dec_hi = to_usize(floor_rational(&Rational::from((1 - beta.clone()) * &nn)));
    let run = |kind, lo: usize, hi: usize| {
        if lo > hi {
            Ok(MonotonicityReport::vacuous(kind, lo, hi, s, Strictness::NonStrict))
        } else {
            check_sstep(seq, kind, lo, hi, s)
        }
    };
    let increasing = run(Direction::Increasing, inc_lo, inc_hi)?;
    let decreasing = run(Direction::Decreasing, dec_lo, dec_hi)?;
    Ok(PropertyBgs {
        beta: beta.clone(),
        gamma: gamma.clone(),
        s,
        n,
        holds: increasing.holds && decreasing.holds,
        increasing,
        decreasing,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnimodalityReport {
    pub holds: bool,
    /// First index of the maximum.
    pub mode: usize,
    pub witness: Option<(usize, usize)>,
}

pub fn check_unimodal(seq: &[Integer]) -> Result<UnimodalityReport> {
    if seq.is_empty() {
        return Err(Error::InvalidParameter("empty sequence".into()));
    }
    let mode = (0..seq.len()).fold(0, |m, i| if seq[i] > seq[m] { i } else { m });
    let up = check_sstep(seq, Direction::Increasing, 0, mode, 1)?;
    let down = check_sstep(seq, Direction::Decreasing, mode, seq.len() - 1, 1)?;
    Ok(UnimodalityReport {
        holds: up.holds && down.holds,
        mode,
        witness: up.witness.or(down.witness),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinalThirdReport {
    pub start: usize,
    pub alpha: usize,
    pub holds: bool,
    pub witness: Option<(usize, usize)>,
}

/// Non-increasing run from `ceil((2 alpha - 1)/3)` to `alpha`.
pub fn check_final_third(seq: &[Integer]) -> Result<FinalThirdReport> {
    if seq.is_empty() {
        return Err(Error::InvalidParameter("empty sequence".into()));
    }
    let alpha = seq.len() - 1;
    let start = if alpha == 0 { 0 } else { (2 * alpha + 1) / 3 };
    let r = check_sstep(seq, Direction::Decreasing, start, alpha, 1)?;
    Ok(FinalThirdReport {
        start,
        alpha,
        holds: r.holds,
        witness: r.witness,
    })
}

/// `log2( i_t(Q_d) / (2 C(2^(d-1), t)) )` from an exact count.
pub fn transition_ratio(d: u32, t: u64, it: &Integer) -> Result<Float> {
    if d == 0 || d > 63 {
        return Err(Error::InvalidParameter(format!("dimension {d} outside 1..=63")));
    }
    let half = 1u64 << (d - 1);
    if t > half {
        return Err(Error::InvalidParameter(format!("t = {t} exceeds 2^(d-1) = {half}")));
    }
    if *it <= 0 {
        return Err(Error::InvalidParameter("count must be positive".into()));
    }
    let denom = binomial(half, t as i64) * 2u32;
    let ratio = Rational::from((it.clone(), denom));
    Ok(log2_rational(&ratio, DEFAULT_PRECISION, Side::Nearest))
}

/// `g = d (t / 2^(d-1) - 1/2)`, so that `t = 2^(d-1) (1/2 + g/d)`.
pub fn transition_g(d: u32, t: &Integer) -> Rational {
    let half = Integer::from(1) << (d - 1);
    Rational::from((t.clone(), half)) * d - Rational::from((d, 2))
}

/// Predicted limit `exp{e^(-2g)/2}` of the transition ratio.
pub fn transition_limit(g: &Rational) -> Float {
    let prec = DEFAULT_PRECISION;
    let mut inner = Float::with_val(prec, g) * -2i32;
    inner.exp_mut();
    let mut out = inner / 2u32;
    out.exp_mut();
    out
}

/// `e` at the working precision, for callers wanting `log2` forms of the limit.
pub fn log2_e() -> Float {
    let e = Float::with_val(DEFAULT_PRECISION, Constant::Log2);
    Float::with_val(DEFAULT_PRECISION, 1) / e
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    fn q(s: &str) -> Rational {
        crate::numeric::parse_rational(s).unwrap()
    }

    /// All-pairs definition check, returning the lexicographically first violation.
    fn oracle(seq: &[Integer], kind: Direction, lo: usize, hi: usize, s: usize, strict: Strictness) -> Option<(usize, usize)> {
        for i in lo..=hi {
            for j in i..=hi {
                if j - i >= s && violates(kind, strict, &seq[i], &seq[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    #[test]
    fn aems_examples() {
        let a = ints(&[1, 49, 48, 64]);
        let r = check_sstep(&a, Direction::Increasing, 0, 3, 1).unwrap();
        assert_eq!((r.holds, r.witness), (false, Some((1, 2))));
        assert!(check_sstep(&a, Direction::Increasing, 0, 3, 2).unwrap().holds);
        let u = check_unimodal(&a).unwrap();
        assert!(!u.holds);
        assert_eq!(u.witness, Some((1, 2)));
        assert!(matches!(check_property_bgs(&a, 24, &q("0"), &q("0"), 1), Err(Error::Unbalanced { .. })));
    }

    #[test]
    fn basic_cases() {
        let inc = ints(&[1, 2, 3, 5, 8]);
        assert!(check_sstep(&inc, Direction::Increasing, 0, 4, 1).unwrap().holds);
        assert!(check_sstep(&inc, Direction::Decreasing, 0, 4, 5).unwrap().holds);
        assert!(check_sstep(&inc, Direction::Increasing, 3, 2, 1).is_err());
        assert!(check_sstep(&inc, Direction::Increasing, 0, 5, 1).is_err());
        assert!(check_sstep(&inc, Direction::Increasing, 0, 4, 0).is_err());
        let flat = ints(&[3, 3, 3]);
        assert!(check_sstep(&flat, Direction::Increasing, 0, 2, 1).unwrap().holds);
        let strict = check_sstep_with(&flat, Direction::Increasing, 0, 2, 1, Strictness::Strict).unwrap();
        assert_eq!(strict.witness, Some((0, 1)));
    }

    #[test]
    fn property_on_q4_and_toy() {
        // i_t(Q_4)
        let q4 = ints(&[1, 16, 88, 208, 228, 128, 36, 8, 2]);
        assert!(check_property_bgs(&q4, 8, &q("0"), &q("1/5"), 1).unwrap().holds);
        let toy = ints(&[1, 4, 6, 4, 1]);
        assert!(check_property_bgs(&toy, 4, &q("0"), &q("0"), 1).unwrap().holds);
        let bumpy = ints(&[1, 4, 3, 6, 4, 1]);
        let r = check_property_bgs(&bumpy, 5, &q("0"), &q("0"), 1).unwrap();
        assert!(!r.holds);
        assert_eq!(r.increasing.witness, Some((1, 2)));
    }

    #[test]
    fn final_third_examples() {
        let r = check_final_third(&ints(&[1, 8, 16, 8, 2])).unwrap();
        assert_eq!((r.start, r.holds), (3, true));
        assert!(check_final_third(&ints(&[1, 5, 5, 5])).unwrap().holds);
        let bad = check_final_third(&ints(&[1, 5, 2, 3])).unwrap();
        assert_eq!((bad.start, bad.witness), (2, Some((2, 3))));
        assert!(check_final_third(&ints(&[1])).unwrap().holds);
    }

    #[test]
    fn transition_limits() {
        let at_zero = transition_limit(&q("0")).to_f64();
        assert!((at_zero - 0.5f64.exp()).abs() < 1e-15);
        assert!((transition_limit(&q("40")).to_f64() - 1.0).abs() < 1e-15);
        assert_eq!(transition_g(5, &Integer::from(8)), 0);
        assert_eq!(transition_g(5, &Integer::from(12)), q("5/4"));
        // i_8(Q_5) / (2 C(16, 8)) from the exact count, compared loosely with exp(1/2)
        let r = transition_ratio(5, 8, &Integer::from(29953728u64)).unwrap();
        assert!(r.to_f64().is_finite());
        assert!(transition_ratio(5, 17, &Integer::from(1)).is_err());
        assert!((log2_e().to_f64() - std::f64::consts::LOG2_E).abs() < 1e-15);
    }

    fn seq_strategy() -> impl Strategy<Value = Vec<Integer>> {
        proptest::collection::vec(0i64..20, 1..24).prop_map(|v| ints(&v))
    }

    proptest! {
        #[test]
        fn sstep_matches_all_pairs(seq in seq_strategy(), s in 1usize..5, a in 0usize..24, b in 0usize..24, dec in any::<bool>(), strict in any::<bool>()) {
            let hi = a.max(b).min(seq.len() - 1);
            let lo = a.min(b).min(hi);
            let kind = if dec { Direction::Decreasing } else { Direction::Increasing };
            let st = if strict { Strictness::Strict } else { Strictness::NonStrict };
            let r = check_sstep_with(&seq, kind, lo, hi, s, st).unwrap();
            let expected = oracle(&seq, kind, lo, hi, s, st);
            prop_assert_eq!(r.witness, expected);
            prop_assert_eq!(r.holds, expected.is_none());
            if let Some((i, j)) = r.witness {
                prop_assert!(lo <= i && j <= hi && j - i >= s);
                prop_assert!(violates(kind, st, &seq[i], &seq[j]));
            }
        }

        #[test]
        fn unimodal_matches_valley_oracle(seq in seq_strategy()) {
            let n = seq.len();
            let valley = (0..n).any(|i| (i..n).any(|j| (j..n).any(|k| seq[j] < seq[i] && seq[j] < seq[k])));
            prop_assert_eq!(check_unimodal(&seq).unwrap().holds, !valley);
        }

        #[test]
        fn property_monotone_in_parameters(seq in proptest::collection::vec(1i64..50, 9..17), s in 1usize..4, b in 0u32..4, g in 0u32..4) {
            let seq = ints(&seq);
            let n = seq.len() - 1;
            let beta = Rational::from((b, 10));
            let gamma = Rational::from((g, 10));
            let base = check_property_bgs(&seq, n, &beta, &gamma, s).unwrap();
            if base.holds {
                prop_assert!(check_property_bgs(&seq, n, &beta, &gamma, s + 1).unwrap().holds);
                let wider_b = Rational::from((b + 1, 10));
                let wider_g = Rational::from((g + 1, 10));
                prop_assert!(check_property_bgs(&seq, n, &wider_b, &gamma, s).unwrap().holds);
                prop_assert!(check_property_bgs(&seq, n, &beta, &wider_g, s).unwrap().holds);
            }
        }
    }
}
