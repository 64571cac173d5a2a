//! Random subgraphs `G^p` keeping each edge independently with probability
//! `p`, the bipartite model `G(n, n, p)`, and a seeded experiment measuring how
//! often sampled graphs have property `(eps, eps, s)`.
//!
//! Edge `i` of trial `r` reads the `i`-th 64-bit word of ChaCha8 stream `r`
//! under key `seed`, so samples are independent of scheduling.

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::bounds::BoundsEngine;
use crate::count::side_profile_capped;
use crate::error::{Error, Result};
use crate::graph::{bipartition, complete_bipartite, generate, regularity_profile, Bipartition, Graph, GraphFamily};
use crate::seq::check_property_bgs;

/// Default cap on each side of a sampled bipartite graph.
pub const DEFAULT_MAX_SIDE: usize = 22;

fn check_probability(p: &Rational) -> Result<()> {
    if *p < 0 || *p > 1 {
        return Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// `floor(p 2^64)`, or `None` when every edge is kept.
fn keep_threshold(p: &Rational) -> Option<u64> {
    if *p == 1 {
        return None;
    }
    let scaled = Rational::from(p * (Integer::from(1) << 64u32));
    Some(Integer::from(scaled.floor_ref()).to_u64().expect("p < 1"))
}

pub fn percolate(g: &Graph, p: &Rational, seed: u64) -> Result<Graph> {
    percolate_trial(g, p, seed, 0)
}

/// Trial `trial` of the percolation of `g`; edges are visited in the order of
/// [`Graph::edges`].
pub fn percolate_trial(g: &Graph, p: &Rational, seed: u64, trial: u64) -> Result<Graph> {
    check_probability(p)?;
    let threshold = keep_threshold(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let kept: Vec<(usize, usize)> = g
        .edges()
        .enumerate()
        .filter(|&(i, _)| match threshold {
            None => true,
            Some(th) => {
                rng.set_word_pos(2 * i as u128);
                rng.next_u64() < th
            }
        })
        .map(|(_, e)| e)
        .collect();
    let out = Graph::from_edges(g.order(), kept)?;
    match g.labels() {
        Some(labels) => out.with_labels(labels.to_vec()),
        None => Ok(out),
    }
}

/// `G(n, n, p)` with the bipartition of `K_{n,n}` (sides `0..n` and `n..2n`).
pub fn gnnp(n: usize, p: &Rational, seed: u64) -> Result<(Graph, Bipartition)> {
    gnnp_trial(n, p, seed, 0)
}

pub fn gnnp_trial(n: usize, p: &Rational, seed: u64, trial: u64) -> Result<(Graph, Bipartition)> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let g = percolate_trial(&complete_bipartite(n, n), p, seed, trial)?;
    let b = Bipartition::from_classes(&g, (0..n).collect(), (n..2 * n).collect())?;
    Ok((g, b))
}

/// How the step `s` of the property is chosen per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SRule {
    /// `floor(K(eps) max{log2 n, n h(G^p, d')}) + 1` from the almost-regular bound.
    #[default]
    AlmostRegular,
    Fixed(u64),
}

impl FromStr for SRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "almost-regular" => Ok(SRule::AlmostRegular),
            _ => s
                .strip_prefix("fixed:")
                .and_then(|v| v.parse().ok())
                .filter(|&v| v > 0)
                .map(SRule::Fixed)
                .ok_or_else(|| Error::Parse(format!("unknown s rule `{s}` (almost-regular | fixed:S)"))),
        }
    }
}

impl fmt::Display for SRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SRule::AlmostRegular => write!(f, "almost-regular"),
            SRule::Fixed(s) => write!(f, "fixed:{s}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PercolationConfig {
    pub base: GraphFamily,
    pub p: Rational,
    pub seed: u64,
    pub trials: u64,
    pub max_side: usize,
    /// Thread count for the trial loop; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl PercolationConfig {
    pub fn new(base: GraphFamily, p: Rational, seed: u64, trials: u64) -> Self {
        Self {
            base,
            p,
            seed,
            trials,
            max_side: DEFAULT_MAX_SIDE,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    /// ChaCha8 stream id of the trial.
    pub stream: u64,
    pub edges: usize,
    pub alpha: usize,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub h_value: Rational,
    pub s: u64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExperimentSummary {
    pub base: String,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub p: Rational,
    pub seed: u64,
    pub trials: u64,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub epsilon: Rational,
    pub s_rule: String,
    /// Degree parameter used in `h(G^p, d')`.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub d_prime: Rational,
    pub d_prime_rule: &'static str,
    pub successes: u64,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub success_rate: Rational,
    pub per_trial: Vec<TrialRecord>,
}

/// Samples `cfg.trials` percolations of the base graph, counts each exactly
/// with the side-profile backend and checks property `(eps, eps, s)`.
///
/// `d' = Δ(base) p`, which is `np` for `K_{n,n}`.
pub fn run_experiment(cfg: &PercolationConfig, epsilon: &Rational, rule: SRule) -> Result<ExperimentSummary> {
    check_probability(&cfg.p)?;
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if *epsilon < 0 || *epsilon >= 1 {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} outside [0, 1)")));
    }
    let base = generate(&cfg.base)?;
    let b = bipartition(&base)?;
    if b.class_e().len() != b.class_o().len() {
        return Err(Error::InvalidParameter("base graph must have balanced classes".into()));
    }
    let n = b.class_e().len();
    if n > cfg.max_side {
        return Err(Error::SizeCap {
            what: "percolation side",
            limit: cfg.max_side,
            actual: n,
        });
    }
    let d_prime = Rational::from(&cfg.p * base.max_degree() as u64);
    if d_prime == 0 {
        return Err(Error::InvalidParameter("d' = Δ p must be positive".into()));
    }
    let engine = BoundsEngine::default();
    let run = |trial: u64| -> Result<TrialRecord> {
        let g = percolate_trial(&base, &cfg.p, cfg.seed, trial)?;
        let seq = side_profile_capped(&g, &b, cfg.max_side)?.sequence();
        let h_value = regularity_profile(&g, &b, &d_prime)?.h_value;
        let s = match rule {
            SRule::Fixed(s) => s,
            SRule::AlmostRegular => engine.almost_regular_step(n as u64, &h_value, epsilon)?,
        };
        let s_usize = usize::try_from(s).unwrap_or(usize::MAX);
        let verdict = check_property_bgs(seq.counts(), n, epsilon, epsilon, s_usize)?;
        Ok(TrialRecord {
            stream: trial,
            edges: g.edge_count(),
            alpha: seq.alpha(),
            h_value,
            s,
            holds: verdict.holds,
        })
    };
    let collect = || (0..cfg.trials).into_par_iter().map(run).collect::<Result<Vec<_>>>();
    let per_trial = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(collect)?,
        None => collect()?,
    };
    let successes = per_trial.iter().filter(|r| r.holds).count() as u64;
    Ok(ExperimentSummary {
        base: cfg.base.to_string(),
        p: cfg.p.clone(),
        seed: cfg.seed,
        trials: cfg.trials,
        epsilon: epsilon.clone(),
        s_rule: rule.to_string(),
        d_prime,
        d_prime_rule: "max_degree(base) * p",
        successes,
        success_rate: Rational::from((successes, cfg.trials)),
        per_trial,
    })
}

/// `p = (log2 n)^2 / n`, a concrete stand-in for `p = ω(1)/n`, rounded to a
/// rational with denominator `2^32`.
pub fn default_sparse_p(n: usize) -> Rational {
    let l = (n as f64).log2();
    let v = (l * l / n as f64).min(1.0);
    Rational::from(((v * 4294967296.0).floor() as u64, 1u64 << 32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::BoundsEngine;
    use crate::graph::hypercube;
    use crate::numeric::{binomial, parse_rational};
    use crate::seq::check_property_bgs;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn trivial_probabilities() {
        let g = hypercube(4);
        assert_eq!(percolate(&g, &q("1"), 9).unwrap(), g);
        let none = percolate(&g, &q("0"), 9).unwrap();
        assert_eq!((none.order(), none.edge_count()), (16, 0));
        assert!(percolate(&g, &q("3/2"), 9).is_err());
        let (one, _) = gnnp(1, &q("1"), 0).unwrap();
        assert_eq!(one.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert!(gnnp(0, &q("1/2"), 0).is_err());
    }

    #[test]
    fn same_seed_same_graph() {
        let g = hypercube(5);
        let a = percolate_trial(&g, &q("1/3"), 42, 7).unwrap();
        let b = percolate_trial(&g, &q("1/3"), 42, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, percolate_trial(&g, &q("1/3"), 42, 8).unwrap());
    }

    /// Mean kept-edge count of `K_{8,8}` at `p = 1/2` over `10^4` trials, within 3σ of 32.
    #[test]
    fn edge_count_mean() {
        let g = complete_bipartite(8, 8);
        let trials = 10_000u64;
        let total: usize = (0..trials)
            .into_par_iter()
            .map(|r| percolate_trial(&g, &q("1/2"), 2024, r).unwrap().edge_count())
            .sum();
        let mean = total as f64 / trials as f64;
        let sigma = (64.0 * 0.25 / trials as f64).sqrt();
        assert!((mean - 32.0).abs() <= 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn degree_mean() {
        let (n, trials) = (10usize, 4000u64);
        let p = q("3/10");
        let mut total = 0usize;
        for r in 0..trials {
            let (g, _) = gnnp_trial(n, &p, 5, r).unwrap();
            total += g.degree(0);
        }
        let mean = total as f64 / trials as f64;
        let sigma = (n as f64 * 0.3 * 0.7 / trials as f64).sqrt();
        assert!((mean - 3.0).abs() <= 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn experiment_is_deterministic_across_workers() {
        let mut cfg = PercolationConfig::new(GraphFamily::CompleteBipartite(8, 8), q("1/2"), 11, 12);
        let eps = q("1/10");
        cfg.workers = Some(1);
        let one = run_experiment(&cfg, &eps, SRule::Fixed(2)).unwrap();
        cfg.workers = Some(4);
        let four = run_experiment(&cfg, &eps, SRule::Fixed(2)).unwrap();
        assert_eq!(one, four);
        assert_eq!(serde_json::to_string(&one).unwrap(), serde_json::to_string(&four).unwrap());
        let rate = one.per_trial.iter().filter(|r| r.holds).count() as u64;
        assert_eq!(one.success_rate, Rational::from((rate, 12u64)));
    }

    fn knn_sequence(n: usize) -> Vec<Integer> {
        (0..=n)
            .map(|k| if k == 0 { Integer::from(1) } else { binomial(n as u64, k as i64) * 2u32 })
            .collect()
    }

    #[test]
    fn full_probability_matches_closed_form() {
        let n = 9usize;
        let cfg = PercolationConfig::new(GraphFamily::CompleteBipartite(n, n), q("1"), 3, 2);
        let eps = q("1/10");
        for s in [1u64, 2, 3] {
            let sum = run_experiment(&cfg, &eps, SRule::Fixed(s)).unwrap();
            let closed = check_property_bgs(&knn_sequence(n), n, &eps, &eps, s as usize).unwrap();
            assert!(sum.per_trial.iter().all(|r| r.holds == closed.holds && r.edges == n * n));
        }
        let sum = run_experiment(&cfg, &eps, SRule::AlmostRegular).unwrap();
        let s = BoundsEngine::default().almost_regular_step(n as u64, &Rational::from((1, n)), &eps).unwrap();
        assert!(sum.per_trial.iter().all(|r| r.s == s && r.h_value == Rational::from((1, n))));
    }

    #[test]
    fn regular_step_bound_holds_on_complete_bipartite() {
        let eps = q("1/10");
        let engine = BoundsEngine::default();
        for n in 1..=22usize {
            let s = engine.regular_step_bound(n as u64, n as u64, &eps).unwrap().s;
            let r = check_property_bgs(&knn_sequence(n), n, &Rational::new(), &eps, s as usize).unwrap();
            assert!(r.holds, "n={n}");
        }
    }

    #[test]
    fn s_rule_parsing() {
        assert_eq!("almost-regular".parse::<SRule>().unwrap(), SRule::AlmostRegular);
        assert_eq!("fixed:5".parse::<SRule>().unwrap(), SRule::Fixed(5));
        assert!("fixed:0".parse::<SRule>().is_err());
        assert_eq!(SRule::Fixed(3).to_string(), "fixed:3");
        let p = default_sparse_p(16);
        assert_eq!(p, q("1"));
        assert!(default_sparse_p(1024) < 1);
    }

    #[test]
    fn caps_and_errors() {
        let cfg = PercolationConfig::new(GraphFamily::CompleteBipartite(23, 23), q("1/2"), 0, 1);
        assert!(matches!(run_experiment(&cfg, &q("1/10"), SRule::Fixed(1)), Err(Error::SizeCap { .. })));
        let cfg = PercolationConfig::new(GraphFamily::CompleteBipartite(3, 4), q("1/2"), 0, 1);
        assert!(run_experiment(&cfg, &q("1/10"), SRule::Fixed(1)).is_err());
        let cfg = PercolationConfig::new(GraphFamily::CompleteBipartite(3, 3), q("0"), 0, 1);
        assert!(run_experiment(&cfg, &q("1/10"), SRule::Fixed(1)).is_err());
    }
}
