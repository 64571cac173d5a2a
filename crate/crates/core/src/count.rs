//! Exact independent-set sequences.
//!
//! Two backends: plain branching on a maximum-degree vertex for general graphs,
//! and for bipartite graphs a Gray-code walk over the subsets of the smaller
//! class recording the joint distribution of `(|A|, |N(A)|)`, from which
//! `i_t = sum_A C(|O| - |N(A)|, t - |A|)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bipartition, Bipartition, Graph};
use crate::numeric::{binomial_row, BinomialTable};

/// Default vertex cap of the branching backend (masks are 128 bits wide).
pub const DEFAULT_GENERAL_CAP: usize = 64;
/// Default cap on the smaller bipartition class for the side-profile backend.
pub const DEFAULT_SIDE_CAP: usize = 28;

const MASK_BITS: usize = 128;

/// `counts[t] = i_t(G)` for `t = 0..=alpha`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndSetSequence {
    #[serde(serialize_with = "crate::report::ser_integers")]
    counts: Vec<Integer>,
}

impl IndSetSequence {
    /// Wraps raw counts, dropping trailing zeros. Rejects sequences that do
    /// not start with `i_0 = 1` or contain negative entries.
    pub fn from_counts(mut counts: Vec<Integer>) -> Result<Self> {
        while counts.len() > 1 && counts.last().is_some_and(|c| *c == 0) {
            counts.pop();
        }
        if counts.first().map_or(true, |c| *c != 1) {
            return Err(Error::InvalidParameter("an independent-set sequence starts with 1".into()));
        }
        if counts.iter().any(|c| *c < 0) {
            return Err(Error::InvalidParameter("negative count".into()));
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[Integer] {
        &self.counts
    }

    pub fn alpha(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn get(&self, t: usize) -> Integer {
        self.counts.get(t).cloned().unwrap_or_default()
    }

    /// Total number of independent sets, `P(G, 1)`.
    pub fn total(&self) -> Integer {
        self.counts.iter().sum()
    }

    /// Exact `P(G, lambda)` by Horner's rule.
    pub fn eval(&self, lambda: &Rational) -> Rational {
        polynomial_eval(self, lambda)
    }
}

pub fn polynomial_eval(seq: &IndSetSequence, lambda: &Rational) -> Rational {
    seq.counts.iter().rev().fold(Rational::new(), |acc, c| acc * lambda + c)
}

/// JSON document for a computed sequence.
#[derive(Debug, Serialize)]
pub struct SequenceDocument<'a> {
    pub graph: &'a str,
    pub alpha: usize,
    #[serde(serialize_with = "crate::report::ser_integer")]
    pub total: Integer,
    pub sequence: &'a IndSetSequence,
}

impl<'a> SequenceDocument<'a> {
    pub fn new(graph: &'a str, seq: &'a IndSetSequence) -> Self {
        Self {
            graph,
            alpha: seq.alpha(),
            total: seq.total(),
            sequence: seq,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Side profile when the graph is bipartite and within the cap, else branching.
    #[default]
    Auto,
    General,
    SideProfile,
}

#[derive(Debug, Clone, Copy)]
pub struct CountOptions {
    pub backend: Backend,
    pub general_cap: usize,
    pub side_cap: usize,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self {
            backend: Backend::Auto,
            general_cap: DEFAULT_GENERAL_CAP,
            side_cap: DEFAULT_SIDE_CAP,
        }
    }
}

impl CountOptions {
    pub fn with_backend(backend: Backend) -> Self {
        Self {
            backend,
            ..Self::default()
        }
    }
}

pub fn count_by_size(g: &Graph, opts: &CountOptions) -> Result<IndSetSequence> {
    match opts.backend {
        Backend::General => count_general(g, opts.general_cap),
        Backend::SideProfile => {
            let b = bipartition(g)?;
            Ok(side_profile_capped(g, &b, opts.side_cap)?.sequence())
        }
        Backend::Auto => match bipartition(g) {
            Ok(b) if b.class_e().len() <= opts.side_cap => {
                Ok(side_profile_capped(g, &b, opts.side_cap)?.sequence())
            }
            _ => count_general(g, opts.general_cap),
        },
    }
}

fn count_general(g: &Graph, cap: usize) -> Result<IndSetSequence> {
    let n = g.order();
    let limit = cap.min(MASK_BITS);
    if n > limit {
        return Err(Error::SizeCap {
            what: "branching backend vertex count",
            limit,
            actual: n,
        });
    }
    let adj: Vec<u128> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u128, |m, &u| m | 1u128 << u))
        .collect();
    let rows = small_binomial_rows(n);
    let alive = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    // Every entry is at most C(128, k) < 2^127, so u128 never overflows.
    let counts = branch(alive, &adj, &rows);
    IndSetSequence::from_counts(counts.into_iter().map(Integer::from).collect())
}

fn small_binomial_rows(n: usize) -> Vec<Vec<u128>> {
    let mut rows: Vec<Vec<u128>> = vec![vec![1]];
    for m in 1..=n {
        let prev = &rows[m - 1];
        let mut row = vec![1u128; m + 1];
        for k in 1..m {
            row[k] = prev[k - 1] + prev[k];
        }
        rows.push(row);
    }
    rows
}

/// `seq(G) = seq(G - v) + shift(seq(G - N[v]))` on a maximum-degree vertex,
/// bottoming out on edgeless induced subgraphs.
fn branch(alive: u128, adj: &[u128], rows: &[Vec<u128>]) -> Vec<u128> {
    let mut best = None;
    let mut best_deg = 0;
    let mut rest = alive;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let deg = (adj[v] & alive).count_ones();
        if deg > best_deg {
            best_deg = deg;
            best = Some(v);
        }
    }
    let Some(v) = best else {
        return rows[alive.count_ones() as usize].clone();
    };
    let without_v = alive & !(1u128 << v);
    let mut out = branch(without_v, adj, rows);
    let with_v = branch(without_v & !adj[v], adj, rows);
    if out.len() < with_v.len() + 1 {
        out.resize(with_v.len() + 1, 0);
    }
    for (t, c) in with_v.into_iter().enumerate() {
        out[t + 1] += c;
    }
    out
}

/// Joint distribution of `(|A|, |N(A)|)` over all subsets `A` of the `E` class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideProfile {
    e_size: usize,
    o_size: usize,
    table: BTreeMap<(usize, usize), Integer>,
}

impl SideProfile {
    pub fn e_size(&self) -> usize {
        self.e_size
    }

    pub fn o_size(&self) -> usize {
        self.o_size
    }

    pub fn table(&self) -> &BTreeMap<(usize, usize), Integer> {
        &self.table
    }

    pub fn get(&self, a: usize, m: usize) -> Integer {
        self.table.get(&(a, m)).cloned().unwrap_or_default()
    }

    /// `i_t = sum_{(a,m)} table[(a,m)] * C(|O| - m, t - a)`.
    pub fn sequence(&self) -> IndSetSequence {
        let o = self.o_size;
        let mut counts = vec![Integer::new(); self.e_size + o + 1];
        let pascal = (o <= 2048).then(|| BinomialTable::new(o));
        let mut rows: BTreeMap<usize, Vec<Integer>> = BTreeMap::new();
        for (&(a, m), mult) in &self.table {
            let free = o - m;
            let row: &[Integer] = match &pascal {
                Some(p) => p.row(free),
                None => rows.entry(free).or_insert_with(|| binomial_row(free)),
            };
            for (k, c) in row.iter().enumerate() {
                counts[a + k] += Integer::from(mult * c);
            }
        }
        IndSetSequence::from_counts(counts).expect("profile always contains the empty set")
    }
}

pub fn side_profile(g: &Graph, b: &Bipartition) -> Result<SideProfile> {
    side_profile_capped(g, b, DEFAULT_SIDE_CAP)
}

pub fn side_profile_capped(g: &Graph, b: &Bipartition, cap: usize) -> Result<SideProfile> {
    let e = b.class_e();
    let o = b.class_o();
    if e.len() > cap.min(40) {
        return Err(Error::SizeCap {
            what: "side-profile class size",
            limit: cap.min(40),
            actual: e.len(),
        });
    }
    let mut o_index = vec![usize::MAX; g.order()];
    for (i, &v) in o.iter().enumerate() {
        o_index[v] = i;
    }
    let nbrs: Vec<Vec<u32>> = e
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .map(|&u| {
                    debug_assert!(!b.is_e(u as usize));
                    o_index[u as usize] as u32
                })
                .collect()
        })
        .collect();
    let counts = gray_walk(&nbrs, o.len());
    let mut table = BTreeMap::new();
    for (a, row) in counts.iter().enumerate() {
        for (m, &c) in row.iter().enumerate() {
            if c > 0 {
                table.insert((a, m), Integer::from(c));
            }
        }
    }
    Ok(SideProfile {
        e_size: e.len(),
        o_size: o.len(),
        table,
    })
}

/// Number of high-order subset bits fixed per parallel chunk.
fn split_bits(k: usize) -> usize {
    if k >= 16 {
        6
    } else {
        0
    }
}

/// `counts[a][m]` = number of subsets with `|A| = a`, `|N(A)| = m`.
///
/// Subsets are walked in Gray-code order; a per-vertex coverage counter on
/// the `O` side makes each step cost `O(deg)`.
fn gray_walk(nbrs: &[Vec<u32>], o_len: usize) -> Vec<Vec<u64>> {
    let k = nbrs.len();
    let high = split_bits(k);
    let low = k - high;
    let chunks: Vec<Vec<Vec<u64>>> = (0u64..1 << high)
        .into_par_iter()
        .map(|prefix| {
            let mut counts = vec![vec![0u64; o_len + 1]; k + 1];
            let mut cover = vec![0u32; o_len];
            let mut covered = 0usize;
            let mut size = 0usize;
            let toggle = |v: usize, adding: bool, cover: &mut [u32], covered: &mut usize| {
                for &u in &nbrs[v] {
                    let c = &mut cover[u as usize];
                    if adding {
                        if *c == 0 {
                            *covered += 1;
                        }
                        *c += 1;
                    } else {
                        *c -= 1;
                        if *c == 0 {
                            *covered -= 1;
                        }
                    }
                }
            };
            for j in 0..high {
                if prefix >> j & 1 == 1 {
                    toggle(low + j, true, &mut cover, &mut covered);
                    size += 1;
                }
            }
            counts[size][covered] += 1;
            let mut gray: u64 = 0;
            for i in 1u64..1 << low {
                let j = i.trailing_zeros() as usize;
                gray ^= 1 << j;
                let adding = gray >> j & 1 == 1;
                toggle(j, adding, &mut cover, &mut covered);
                if adding {
                    size += 1;
                } else {
                    size -= 1;
                }
                counts[size][covered] += 1;
            }
            counts
        })
        .collect();
    let mut total = vec![vec![0u64; o_len + 1]; k + 1];
    for chunk in chunks {
        for (row, add) in total.iter_mut().zip(chunk) {
            for (x, y) in row.iter_mut().zip(add) {
                *x += y;
            }
        }
    }
    total
}
