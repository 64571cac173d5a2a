//! Exact combinatorics on the hypercube `Q_d`: neighbourhoods, closures,
//! 2-components, and the two enumeration inequalities bracketing `i_t(Q_d)`.
//!
//! Vertices are the integers `0..2^d`; adjacency is a single bit flip. The
//! even-weight class `E` contains `0`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use fixedbitset::FixedBitSet;
use rug::{Integer, Rational};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::estimates::{big_f, f_cut};
use crate::numeric::binomial;

/// Largest dimension for bitset-backed vertex sets.
pub const MAX_SET_DIMENSION: u32 = 20;
/// Largest dimension for the scattered-set count behind the lower bound.
pub const MAX_SCATTERED_DIMENSION: u32 = 6;
/// Largest dimension for the full small-set enumeration.
pub const MAX_SMALL_SET_DIMENSION: u32 = 5;

pub const CACHE_ENV: &str = "STABLESEQ_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    E,
    O,
    Mixed,
}

pub fn weight_parity(v: usize) -> Parity {
    if v.count_ones() % 2 == 0 {
        Parity::E
    } else {
        Parity::O
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    d: u32,
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn new(d: u32) -> Result<Self> {
        if d > MAX_SET_DIMENSION {
            return Err(Error::SizeCap {
                what: "hypercube dimension".into(),
                limit: MAX_SET_DIMENSION as usize,
                actual: d as usize,
            });
        }
        Ok(Self {
            d,
            bits: FixedBitSet::with_capacity(1 << d),
        })
    }

    pub fn from_vertices(d: u32, vs: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::new(d)?;
        for v in vs {
            s.try_insert(v)?;
        }
        Ok(s)
    }

    /// The whole parity class `E` or `O`.
    pub fn class(d: u32, parity: Parity) -> Result<Self> {
        let mut s = Self::new(d)?;
        for v in 0..1usize << d {
            if weight_parity(v) == parity {
                s.bits.insert(v);
            }
        }
        Ok(s)
    }

    pub fn try_insert(&mut self, v: usize) -> Result<()> {
        if v >= self.bits.len() {
            return Err(Error::InvalidParameter(format!("vertex {v} outside Q_{}", self.d)));
        }
        self.bits.insert(v);
        Ok(())
    }

    pub fn dimension(&self) -> u32 {
        self.d
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    /// The empty set counts as `E`.
    pub fn side(&self) -> Parity {
        let mut seen = None;
        for v in self.iter() {
            let p = weight_parity(v);
            match seen {
                None => seen = Some(p),
                Some(q) if q != p => return Parity::Mixed,
                _ => {}
            }
        }
        seen.unwrap_or(Parity::E)
    }
}

/// `N(A)`: vertices outside `A` adjacent to some member of `A`.
pub fn neighborhood(a: &VertexSet) -> VertexSet {
    let mut out = VertexSet {
        d: a.d,
        bits: FixedBitSet::with_capacity(a.bits.len()),
    };
    for v in a.iter() {
        for i in 0..a.d {
            out.bits.insert(v ^ (1 << i));
        }
    }
    out.bits.difference_with(&a.bits);
    out
}

/// `[A] = {v : N({v}) ⊆ N(A)}`, taken literally even when `A` is not
/// independent.
pub fn closure(a: &VertexSet) -> VertexSet {
    let na = neighborhood(a);
    let mut out = VertexSet {
        d: a.d,
        bits: FixedBitSet::with_capacity(a.bits.len()),
    };
    if a.d == 0 {
        // N({v}) is empty, so the single vertex always qualifies
        out.bits.insert(0);
        return out;
    }
    for v in 0..a.bits.len() {
        if (0..a.d).all(|i| na.contains(v ^ (1 << i))) {
            out.bits.insert(v);
        }
    }
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Maximal 2-linked subsets of a single-parity set, ordered by smallest member.
///
/// Within one class two vertices share a neighbour exactly when they are at
/// Hamming distance 2, so components are found by union-find over double flips.
pub fn two_components(a: &VertexSet) -> Result<Vec<VertexSet>> {
    if a.side() == Parity::Mixed {
        return Err(Error::MixedParity);
    }
    let members: Vec<usize> = a.iter().collect();
    let index: BTreeMap<usize, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut uf = UnionFind::new(members.len());
    for (i, &v) in members.iter().enumerate() {
        for x in 0..a.d {
            for y in x + 1..a.d {
                if let Some(&j) = index.get(&(v ^ (1 << x) ^ (1 << y))) {
                    uf.union(i, j);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, VertexSet> = BTreeMap::new();
    for (i, &v) in members.iter().enumerate() {
        let root = uf.find(i);
        groups
            .entry(root)
            .or_insert_with(|| VertexSet {
                d: a.d,
                bits: FixedBitSet::with_capacity(a.bits.len()),
            })
            .bits
            .insert(v);
    }
    Ok(groups.into_values().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureStats {
    pub d: u32,
    pub size: usize,
    pub nbhd: usize,
    pub closure: usize,
    pub small: bool,
    pub comps: usize,
    pub max_comp: usize,
}

pub fn structure_stats(a: &VertexSet) -> Result<StructureStats> {
    let comps = two_components(a)?;
    let closure = closure(a).len();
    Ok(StructureStats {
        d: a.d,
        size: a.len(),
        nbhd: neighborhood(a).len(),
        closure,
        small: a.d >= 2 && closure <= 1 << (a.d - 2),
        comps: comps.len(),
        max_comp: comps.iter().map(VertexSet::len).max().unwrap_or(0),
    })
}

fn even_vertices(d: u32) -> Vec<usize> {
    (0..1usize << d).filter(|&v| weight_parity(v) == Parity::E).collect()
}

/// Number of `A ⊆ E` with `cl(A) <= 1` and `|A| = k`, indexed by `k`.
///
/// Such sets are exactly the subsets of `E` with pairwise distance at least 4;
/// counted by backtracking in increasing vertex order.
pub fn scattered_counts(d: u32) -> Result<Vec<Integer>> {
    if d > MAX_SCATTERED_DIMENSION {
        return Err(Error::SizeCap {
            what: "dimension for scattered-set count".into(),
            limit: MAX_SCATTERED_DIMENSION as usize,
            actual: d as usize,
        });
    }
    cached(d, "scattered", || {
        let evens = even_vertices(d);
        let mut counts: Vec<u64> = vec![0];
        fn walk(evens: &[usize], start: usize, chosen: &mut Vec<usize>, counts: &mut Vec<u64>) {
            if counts.len() <= chosen.len() {
                counts.push(0);
            }
            counts[chosen.len()] += 1;
            for i in start..evens.len() {
                let v = evens[i];
                if chosen.iter().all(|&u| (u ^ v).count_ones() >= 4) {
                    chosen.push(v);
                    walk(evens, i + 1, chosen, counts);
                    chosen.pop();
                }
            }
        }
        walk(&evens, 0, &mut Vec::new(), &mut counts);
        Ok(counts.into_iter().map(Integer::from).collect())
    })
}

/// `2 Σ_{A ⊆ E, cl(A) <= 1, |A| <= f} C(2^(d-1) - d|A|, t - |A|)` for an
/// explicit cut `f`. Requires `f < t/2` so the `E`- and `O`-sided families do
/// not overlap.
pub fn scattered_lower_with_cut(d: u32, t: u64, f: u64) -> Result<Integer> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    if 2 * f >= t {
        return Err(Error::NotApplicable(format!("cut f = {f} is not below t/2 = {t}/2")));
    }
    let half = 1u64 << (d - 1);
    let counts = scattered_counts(d)?;
    let mut sum = Integer::new();
    for (k, c) in counts.iter().enumerate().take(f as usize + 1) {
        let k = k as u64;
        sum += c * binomial(half - d as u64 * k, t as i64 - k as i64);
    }
    Ok(sum * 2u32)
}

/// The lower bound with the cut `f(t, d)` of the estimates module; refuses
/// whenever that cut is not below `t/2`, which is the usual case for small `d`.
pub fn scattered_lower(d: u32, t: u64) -> Result<Integer> {
    if d == 0 || d > 63 || t == 0 || t >= 1u64 << (d - 1) {
        return Err(Error::NotApplicable(format!("t = {t} outside (0, 2^(d-1)) at d = {d}")));
    }
    let f = f_cut(d, &Integer::from(t))?;
    match f.to_u64() {
        Some(f) if 2 * f < t => scattered_lower_with_cut(d, t, f),
        _ => Err(Error::NotApplicable(format!("cut f = {f} is not below t/2 = {t}/2"))),
    }
}

/// Counts of small `A ⊆ E` by `(|A|, |N(A)|)`, with the 2-linked ones
/// (exactly one 2-component) tallied separately.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallSetProfile {
    pub d: u32,
    /// `(a, g, count)` over all small sets, including the empty set.
    pub all: Vec<(usize, usize, Integer)>,
    /// `(a, g, count)` over small 2-linked sets.
    pub linked: Vec<(usize, usize, Integer)>,
}

impl SmallSetProfile {
    /// `2 Σ_{A small} C(2^(d-1) - |N(A)|, t - |A|)`.
    pub fn small_set_upper(&self, t: u64) -> Integer {
        let half = 1u64 << (self.d - 1);
        let mut sum = Integer::new();
        for (a, g, c) in &self.all {
            sum += c * binomial(half - *g as u64, t as i64 - *a as i64);
        }
        sum * 2u32
    }

    /// `Σ_{A small} F_λ(|A|, |N(A)|)`.
    pub fn weight_sum(&self, lambda: &Rational) -> Rational {
        weighted(&self.all, lambda, 0)
    }

    /// `Σ F_λ(|A|, |N(A)|)` over small 2-linked `A` with `|A| >= k`.
    pub fn linked_weight_sum(&self, lambda: &Rational, k: usize) -> Rational {
        weighted(&self.linked, lambda, k)
    }
}

fn weighted(rows: &[(usize, usize, Integer)], lambda: &Rational, min_a: usize) -> Rational {
    rows.iter()
        .filter(|(a, _, _)| *a >= min_a)
        .fold(Rational::new(), |acc, (a, g, c)| acc + big_f(lambda, *a as u64, *g as i64) * c)
}

/// Enumerates every subset of `E` (`2^(2^(d-1))` of them) and records the
/// small ones. The closure is recomputed for every subset.
pub fn small_set_profile(d: u32) -> Result<SmallSetProfile> {
    if d < 2 || d > MAX_SMALL_SET_DIMENSION {
        return Err(Error::SizeCap {
            what: "dimension for small-set enumeration (2..=5)".into(),
            limit: MAX_SMALL_SET_DIMENSION as usize,
            actual: d as usize,
        });
    }
    cached(d, "small-sets", || {
        let evens = even_vertices(d);
        let m = evens.len();
        let nbr_mask: Vec<u64> = (0..1usize << d)
            .map(|v| (0..d).fold(0u64, |acc, i| acc | 1 << (v ^ (1 << i))))
            .collect();
        // E-indices at distance 2, for the linkage test
        let close: Vec<u32> = (0..m)
            .map(|i| {
                (0..m).fold(0u32, |acc, j| {
                    if (evens[i] ^ evens[j]).count_ones() == 2 {
                        acc | 1 << j
                    } else {
                        acc
                    }
                })
            })
            .collect();
        let quarter = 1usize << (d - 2);
        let mut all: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        let mut linked: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for mask in 0u32..(1u32 << m) {
            let mut na = 0u64;
            let mut set_bits = 0u64;
            for i in ones32(mask) {
                na |= nbr_mask[evens[i]];
                set_bits |= 1 << evens[i];
            }
            na &= !set_bits;
            let cl = nbr_mask.iter().filter(|&&nb| nb & !na == 0).count();
            if cl > quarter {
                continue;
            }
            let key = (mask.count_ones() as usize, na.count_ones() as usize);
            *all.entry(key).or_default() += 1;
            if mask != 0 && is_linked(mask, &close) {
                *linked.entry(key).or_default() += 1;
            }
        }
        let rows = |t: BTreeMap<(usize, usize), u64>| t.into_iter().map(|((a, g), c)| (a, g, Integer::from(c))).collect();
        Ok(SmallSetProfile {
            d,
            all: rows(all),
            linked: rows(linked),
        })
    })
}

fn ones32(mut mask: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

fn is_linked(mask: u32, close: &[u32]) -> bool {
    let start = mask & mask.wrapping_neg();
    let mut reached = start;
    let mut frontier = start;
    while frontier != 0 {
        let mut next = 0;
        for i in ones32(frontier) {
            next |= close[i];
        }
        frontier = next & mask & !reached;
        reached |= frontier;
    }
    reached == mask
}

pub fn small_set_upper(d: u32, t: u64) -> Result<Integer> {
    Ok(small_set_profile(d)?.small_set_upper(t))
}

/// Both sides of `C(N - g, t - a) = F_{λ(t)}(a, g) C(N, t) E(a, g)` with
/// `N = 2^(d-1)`, in exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightIdentity {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub rhs: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub f_value: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub e_value: Rational,
    pub equal: bool,
}

pub fn weight_identity(d: u32, t: u64, a: u64, g: u64) -> Result<WeightIdentity> {
    if d == 0 || d > 40 {
        return Err(Error::InvalidParameter(format!("dimension {d} outside 1..=40")));
    }
    let n = 1u64 << (d - 1);
    if t == 0 || t >= n {
        return Err(Error::NotApplicable(format!("t = {t} is a degenerate endpoint of [0, {n}]")));
    }
    if a > g || a > t || g > n {
        return Err(Error::InvalidParameter(format!("need a <= g <= 2^(d-1) and a <= t, got a = {a}, g = {g}, t = {t}")));
    }
    let factor = |i: u64, m: u64| Rational::from((Integer::from(m - i), Integer::from(m)));
    let mut e = Rational::from(1);
    for i in 0..a {
        e *= factor(i, t);
    }
    // factors with i = N - t vanish and make both sides zero together
    for i in 0..g - a {
        if i >= n - t {
            e = Rational::new();
            break;
        }
        e *= factor(i, n - t);
    }
    for i in 0..g {
        e /= factor(i, n);
    }
    let lambda = Rational::from((t, n - t));
    let f_value = big_f(&lambda, a, g as i64);
    let lhs = Rational::from(binomial(n - g, t as i64 - a as i64));
    let rhs = Rational::from(&f_value * binomial(n, t as i64)) * &e;
    Ok(WeightIdentity {
        equal: lhs == rhs,
        lhs,
        rhs,
        f_value,
        e_value: e,
    })
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    key: String,
    checksum: String,
    payload: String,
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// Loads `(d, predicate)` from the cache directory when one is configured,
/// verifying the stored sha256; computes and stores on a miss.
fn cached<T: Serialize + DeserializeOwned>(d: u32, predicate: &str, compute: impl FnOnce() -> Result<T>) -> Result<T> {
    match cache_dir() {
        Some(dir) => cached_in(&dir, d, predicate, compute),
        None => compute(),
    }
}

fn cached_in<T: Serialize + DeserializeOwned>(
    dir: &std::path::Path,
    d: u32,
    predicate: &str,
    compute: impl FnOnce() -> Result<T>,
) -> Result<T> {
    let key = format!("{predicate}-d{d}");
    let path = dir.join(format!("{key}.json"));
    if path.exists() {
        let file: CacheFile = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
        let digest = hex::encode(Sha256::digest(file.payload.as_bytes()));
        if file.key != key || digest != file.checksum {
            return Err(Error::CacheIntegrity(format!("{} fails its checksum", path.display())));
        }
        return Ok(serde_json::from_str(&file.payload)?);
    }
    let value = compute()?;
    let payload = serde_json::to_string(&value)?;
    let file = CacheFile {
        checksum: hex::encode(Sha256::digest(payload.as_bytes())),
        key,
        payload,
    };
    std::fs::create_dir_all(dir)?;
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_string(&file)?)?;
    std::fs::rename(tmp, path)?;
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{count_by_size, CountOptions};
    use crate::graph::hypercube;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(d: u32, vs: &[usize]) -> VertexSet {
        VertexSet::from_vertices(d, vs.iter().copied()).unwrap()
    }

    /// Adjacency matrix of `Q_d` built from the Hamming metric.
    fn matrix(d: u32) -> Vec<Vec<bool>> {
        let n = 1usize << d;
        (0..n).map(|u| (0..n).map(|v| (u ^ v).count_ones() == 1).collect()).collect()
    }

    fn brute_nbhd(adj: &[Vec<bool>], a: &[usize]) -> Vec<usize> {
        (0..adj.len()).filter(|v| !a.contains(v) && a.iter().any(|&u| adj[u][*v])).collect()
    }

    fn brute_closure(adj: &[Vec<bool>], a: &[usize]) -> Vec<usize> {
        let na = brute_nbhd(adj, a);
        (0..adj.len())
            .filter(|&v| (0..adj.len()).filter(|&w| adj[v][w]).all(|w| na.contains(&w)))
            .collect()
    }

    /// Components of `A` under "A' ∪ N(A') connected", by BFS on the induced subgraph.
    fn brute_components(adj: &[Vec<bool>], a: &[usize]) -> Vec<Vec<usize>> {
        let mut region: Vec<usize> = a.to_vec();
        region.extend(brute_nbhd(adj, a));
        let mut comp = vec![usize::MAX; adj.len()];
        let mut out = Vec::new();
        for &s in a {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            while let Some(u) = stack.pop() {
                for &w in &region {
                    if adj[u][w] && comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            let mut members: Vec<usize> = a.iter().copied().filter(|&v| comp[v] == id).collect();
            members.sort();
            out.push(members);
        }
        out
    }

    fn agree_with_brute(d: u32, adj: &[Vec<bool>], a: &[usize]) {
        let s = set(d, a);
        assert_eq!(neighborhood(&s).iter().collect::<Vec<_>>(), brute_nbhd(adj, a));
        assert_eq!(closure(&s).iter().collect::<Vec<_>>(), brute_closure(adj, a));
        let mut ours: Vec<Vec<usize>> = two_components(&s).unwrap().iter().map(|c| c.iter().collect()).collect();
        let mut theirs = brute_components(adj, a);
        ours.sort();
        theirs.sort();
        assert_eq!(ours, theirs);
    }

    #[test]
    fn examples() {
        let s = set(3, &[0b000, 0b011]);
        let n: Vec<usize> = neighborhood(&s).iter().collect();
        assert_eq!(n, vec![0b001, 0b010, 0b100, 0b111]);
        let st = structure_stats(&s).unwrap();
        assert_eq!((st.comps, st.max_comp), (1, 2));
        let far = structure_stats(&set(4, &[0b0000, 0b1111])).unwrap();
        assert_eq!((far.comps, far.max_comp, far.nbhd), (2, 1, 8));
        assert_eq!(neighborhood(&set(5, &[0])).len(), 5);
        assert!(neighborhood(&set(5, &[])).is_empty());
        assert!(closure(&set(4, &[])).is_empty());
        for d in 3..=4 {
            for v in 0..1usize << d {
                assert_eq!(closure(&set(d, &[v])).iter().collect::<Vec<_>>(), vec![v]);
            }
            let e = VertexSet::class(d, Parity::E).unwrap();
            assert_eq!(closure(&e), e);
            assert_eq!(neighborhood(&e), VertexSet::class(d, Parity::O).unwrap());
            assert!(!structure_stats(&e).unwrap().small);
        }
        assert!(matches!(two_components(&set(3, &[0, 1])), Err(Error::MixedParity)));
        assert_eq!(set(3, &[1, 2]).side(), Parity::O);
        assert!(VertexSet::new(21).is_err());
    }

    #[test]
    fn literal_closure_can_drop_members() {
        // {0, 1} is an edge: N(A) omits both endpoints, so neither lies in [A]
        let c = closure(&set(3, &[0, 1]));
        assert!(!c.contains(0) && !c.contains(1));
    }

    #[test]
    fn brute_force_agreement_small_sets() {
        for d in 3..=4 {
            let adj = matrix(d);
            let evens = even_vertices(d);
            for i in 0..evens.len() {
                agree_with_brute(d, &adj, &[evens[i]]);
                for j in i + 1..evens.len() {
                    agree_with_brute(d, &adj, &[evens[i], evens[j]]);
                    for k in j + 1..evens.len() {
                        agree_with_brute(d, &adj, &[evens[i], evens[j], evens[k]]);
                    }
                }
            }
        }
    }

    #[test]
    fn brute_force_agreement_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 5..=6 {
            let adj = matrix(d);
            let evens = even_vertices(d);
            for _ in 0..200 {
                let a: Vec<usize> = evens.iter().copied().filter(|_| rng.next_u32() % 4 == 0).collect();
                agree_with_brute(d, &adj, &a);
            }
        }
    }

    #[test]
    fn common_neighbour_cap() {
        for d in 1..=6u32 {
            let n = 1usize << d;
            for u in 0..n {
                for v in u + 1..n {
                    let common = (0..d).filter(|&i| ((u ^ (1 << i)) ^ v).count_ones() == 1).count();
                    assert!(common == 0 || common == 2, "d={d} u={u} v={v}");
                }
            }
        }
    }

    #[test]
    fn neighbourhood_size_facts() {
        for d in 3..=5u32 {
            let evens = even_vertices(d);
            let m = evens.len();
            for mask in 1u32..(1 << m) {
                let a: Vec<usize> = ones32(mask).map(|i| evens[i]).collect();
                let s = set(d, &a);
                let st = structure_stats(&s).unwrap();
                if st.max_comp <= 1 {
                    assert_eq!(st.nbhd, d as usize * st.size);
                }
                if st.size <= 5 {
                    let l = st.size as i64;
                    assert!(st.nbhd as i64 >= d as i64 * l - 2 * l * (l - 1));
                }
            }
        }
    }

    #[test]
    fn neighbourhood_additive_over_components() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let evens = even_vertices(5);
        for _ in 0..200 {
            let a: Vec<usize> = evens.iter().copied().filter(|_| rng.next_u32() % 3 == 0).collect();
            let s = set(5, &a);
            let parts: usize = two_components(&s).unwrap().iter().map(|c| neighborhood(c).len()).sum();
            assert_eq!(parts, neighborhood(&s).len());
        }
    }

    #[test]
    fn scattered_counts_small_k() {
        for d in 3..=6u32 {
            let c = scattered_counts(d).unwrap();
            let half = 1u64 << (d - 1);
            assert_eq!(c[0], 1);
            assert_eq!(c[1], half);
            // pairs at distance >= 4: all pairs minus those at distance 2
            let close_pairs = half * (d as u64 * (d as u64 - 1) / 2) / 2;
            assert_eq!(c.get(2).cloned().unwrap_or_default(), half * (half - 1) / 2 - close_pairs);
        }
        assert!(scattered_counts(7).is_err());
    }

    #[test]
    fn sandwich_on_small_cubes() {
        for d in 3..=5u32 {
            let seq = count_by_size(&hypercube(d), &CountOptions::default()).unwrap();
            let profile = small_set_profile(d).unwrap();
            let half = 1u64 << (d - 1);
            for t in 0..=half {
                let exact = seq.get(t as usize);
                assert!(profile.small_set_upper(t) >= exact, "upper d={d} t={t}");
                for f in 0..=t {
                    if 2 * f < t {
                        assert!(scattered_lower_with_cut(d, t, f).unwrap() <= exact, "lower d={d} t={t} f={f}");
                    }
                }
            }
            assert!(profile.small_set_upper(0) >= 1);
        }
    }

    #[test]
    fn lower_bound_hand_expansion() {
        // only k = 0, 1 fit under f = 1
        let (d, t) = (4u32, 5u64);
        let expected = (binomial(8, 5) + binomial(8 - 4, 4) * 8u32) * 2u32;
        assert_eq!(scattered_lower_with_cut(d, t, 1).unwrap(), expected);
        assert_eq!(scattered_lower_with_cut(d, t, 0).unwrap(), binomial(8, 5) * 2u32);
        assert!(scattered_lower_with_cut(4, 6, 3).is_err());
        assert!(matches!(scattered_lower(4, 6), Err(Error::NotApplicable(_))));
        assert!(matches!(scattered_lower(5, 8), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn small_set_upper_at_q4_middle() {
        assert!(small_set_upper(4, 8).unwrap() >= 2);
        assert!(small_set_upper(6, 8).is_err());
    }

    #[test]
    fn identity_examples() {
        for (d, t, a, g) in [(4, 3, 1, 4), (5, 8, 2, 9), (4, 3, 0, 0), (6, 20, 3, 25)] {
            let r = weight_identity(d, t, a, g).unwrap();
            assert!(r.equal, "{d} {t} {a} {g}");
        }
        let z = weight_identity(4, 3, 0, 0).unwrap();
        assert_eq!(z.e_value, 1);
        assert_eq!(z.lhs, 56);
        assert!(weight_identity(4, 0, 0, 0).is_err());
        assert!(weight_identity(4, 8, 0, 0).is_err());
        assert!(weight_identity(4, 3, 2, 1).is_err());
    }

    #[test]
    fn cache_roundtrip_and_tamper() {
        let dir = tempfile::tempdir().unwrap();
        let first = cached_in(dir.path(), 3, "unit-test", || Ok(vec![Integer::from(5)])).unwrap();
        let again: Vec<Integer> = cached_in(dir.path(), 3, "unit-test", || panic!("should hit the cache")).unwrap();
        assert_eq!(first, again);
        let path = dir.path().join("unit-test-d3.json");
        let text = std::fs::read_to_string(&path).unwrap().replace("5", "6");
        std::fs::write(&path, text).unwrap();
        let bad: Result<Vec<Integer>> = cached_in(dir.path(), 3, "unit-test", || unreachable!());
        assert!(matches!(bad, Err(Error::CacheIntegrity(_))));
    }
}
