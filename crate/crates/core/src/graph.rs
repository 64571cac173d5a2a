//! Simple undirected graphs, the generator families, bipartition detection and
//! the almost-regularity profile `h(G, d)`.

use std::collections::VecDeque;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use rug::Rational;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default cap on generated graph order.
pub const DEFAULT_VERTEX_CAP: usize = 1 << 20;

/// A finite simple graph on vertices `0..n`.
///
/// Neighbourhoods are stored as sorted index lists; [`Graph::neighbor_bits`]
/// materializes a bitset row on demand. Dense rows for every vertex would
/// need `n^2` bits, which rules them out at the `2^20` vertex cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    labels: Option<Vec<String>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            labels: None,
        }
    }

    /// Builds a graph from an edge list, rejecting loops, repeated edges and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("loop at vertex {u}")));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for (v, row) in adj.iter_mut().enumerate() {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!("repeated edge at vertex {v}")));
            }
        }
        Ok(Self { adj, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order() {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.order()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, row)| {
            row.iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn neighbor_bits(&self, v: usize) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.order());
        for &u in &self.adj[v] {
            bits.insert(u as usize);
        }
        bits
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_regular(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|r| r.len() == d).then_some(d)
    }

    /// Full scan of the adjacency structure for symmetry and irreflexivity.
    pub fn check_simple(&self) -> bool {
        self.adj.iter().enumerate().all(|(u, row)| {
            row.windows(2).all(|w| w[0] < w[1])
                && row
                    .iter()
                    .all(|&v| v as usize != u && self.has_edge(v as usize, u))
        })
    }

    /// Disjoint union, relabelling `other` after `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.order() as u32;
        let mut adj = self.adj.clone();
        adj.extend(
            other
                .adj
                .iter()
                .map(|row| row.iter().map(|&v| v + shift).collect()),
        );
        Graph { adj, labels: None }
    }

    /// Reads the plain-text format: a header line `n m` followed by `m` lines `u v`.
    pub fn read_text(reader: impl BufRead) -> Result<Self> {
        let mut lines = reader
            .lines()
            .map(|l| l.map_err(Error::from))
            .filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header line".into()))??;
        let (n, m) = parse_pair(&header)?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {m} edge lines")))??;
            edges.push(parse_pair(&line)?);
        }
        if lines.next().is_some() {
            return Err(Error::Parse(format!("more than {m} edge lines")));
        }
        Graph::from_edges(n, edges)
    }

    pub fn write_text(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "{} {}", self.order(), self.edge_count())?;
        for (u, v) in self.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let bad = || Error::Parse(format!("expected two non-negative integers, got {line:?}"));
    let a = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let b = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((a, b))
}

/// Named graph families addressable by short spec strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphFamily {
    /// `qd:D`, the hypercube on `{0,1}^D`.
    Hypercube(u32),
    /// `knn:A,B`, complete bipartite with sides `A` and `B`.
    CompleteBipartite(usize, usize),
    /// `cycle:N`, `N >= 3`.
    Cycle(usize),
    /// `path:N`, `N >= 1` vertices.
    Path(usize),
    /// `empty:N`, no edges.
    Empty(usize),
    /// `circulant:N,a,b,...`, vertex `i` adjacent to `i +- a`, `i +- b`, ...
    Circulant(usize, Vec<usize>),
    /// `aems`, the 49-vertex claw composite with a non-unimodal sequence.
    Aems,
    /// `file:PATH`, plain-text edge list.
    File(PathBuf),
}

impl FromStr for GraphFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums = || -> Result<Vec<usize>> {
            args.split(',')
                .map(|a| {
                    a.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad argument {a:?} in graph spec {s:?}")))
                })
                .collect()
        };
        let want = |k: usize| -> Result<Vec<usize>> {
            let v = nums()?;
            if v.len() != k {
                return Err(Error::Parse(format!("graph spec {s:?} expects {k} argument(s)")));
            }
            Ok(v)
        };
        Ok(match name {
            "qd" => GraphFamily::Hypercube(want(1)?[0] as u32),
            "knn" => {
                let v = want(2)?;
                GraphFamily::CompleteBipartite(v[0], v[1])
            }
            "cycle" => GraphFamily::Cycle(want(1)?[0]),
            "path" => GraphFamily::Path(want(1)?[0]),
            "empty" => GraphFamily::Empty(want(1)?[0]),
            "circulant" => {
                let v = nums()?;
                if v.len() < 2 {
                    return Err(Error::Parse(format!("graph spec {s:?} needs N and offsets")));
                }
                GraphFamily::Circulant(v[0], v[1..].to_vec())
            }
            "aems" if args.is_empty() => GraphFamily::Aems,
            "file" if !args.is_empty() => GraphFamily::File(PathBuf::from(args)),
            _ => return Err(Error::Parse(format!("unknown graph spec {s:?}"))),
        })
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphFamily::Hypercube(d) => write!(f, "qd:{d}"),
            GraphFamily::CompleteBipartite(a, b) => write!(f, "knn:{a},{b}"),
            GraphFamily::Cycle(n) => write!(f, "cycle:{n}"),
            GraphFamily::Path(n) => write!(f, "path:{n}"),
            GraphFamily::Empty(n) => write!(f, "empty:{n}"),
            GraphFamily::Circulant(n, offs) => {
                write!(f, "circulant:{n}")?;
                offs.iter().try_for_each(|o| write!(f, ",{o}"))
            }
            GraphFamily::Aems => write!(f, "aems"),
            GraphFamily::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl GraphFamily {
    fn order(&self) -> Option<usize> {
        match self {
            GraphFamily::Hypercube(d) => 1usize.checked_shl(*d).filter(|_| *d < usize::BITS),
            GraphFamily::CompleteBipartite(a, b) => a.checked_add(*b),
            GraphFamily::Cycle(n)
            | GraphFamily::Path(n)
            | GraphFamily::Empty(n)
            | GraphFamily::Circulant(n, _) => Some(*n),
            GraphFamily::Aems => Some(49),
            GraphFamily::File(_) => None,
        }
    }
}

/// Generates a family member with the default vertex cap.
pub fn generate(family: &GraphFamily) -> Result<Graph> {
    generate_capped(family, DEFAULT_VERTEX_CAP)
}

pub fn generate_capped(family: &GraphFamily, cap: usize) -> Result<Graph> {
    if !matches!(family, GraphFamily::File(_)) {
        let n = family.order().unwrap_or(usize::MAX);
        if n > cap {
            return Err(Error::SizeCap {
                what: "graph order",
                limit: cap,
                actual: n,
            });
        }
    }
    match family {
        GraphFamily::Hypercube(d) => Ok(hypercube(*d)),
        GraphFamily::CompleteBipartite(a, b) => Ok(complete_bipartite(*a, *b)),
        GraphFamily::Cycle(n) => {
            if *n < 3 {
                return Err(Error::InvalidParameter(format!("cycle needs n >= 3, got {n}")));
            }
            Graph::from_edges(*n, (0..*n).map(|i| (i, (i + 1) % n)))
        }
        GraphFamily::Path(n) => {
            if *n == 0 {
                return Err(Error::InvalidParameter("path needs at least one vertex".into()));
            }
            Graph::from_edges(*n, (1..*n).map(|i| (i - 1, i)))
        }
        GraphFamily::Empty(n) => Ok(Graph::empty(*n)),
        GraphFamily::Circulant(n, offsets) => circulant(*n, offsets),
        GraphFamily::Aems => Ok(aems()),
        GraphFamily::File(path) => {
            let file = std::fs::File::open(path)?;
            let g = Graph::read_text(std::io::BufReader::new(file))?;
            if g.order() > cap {
                return Err(Error::SizeCap {
                    what: "graph order",
                    limit: cap,
                    actual: g.order(),
                });
            }
            Ok(g)
        }
    }
}

/// `Q_d`: vertex `i` is the binary string of `i`, neighbours differ in one bit.
pub fn hypercube(d: u32) -> Graph {
    let n = 1usize << d;
    let adj = (0..n)
        .map(|v| {
            let mut row: Vec<u32> = (0..d).map(|k| (v ^ (1 << k)) as u32).collect();
            row.sort_unstable();
            row
        })
        .collect();
    Graph { adj, labels: None }
}

/// `K_{a,b}` with the `a`-side on `0..a`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut adj = vec![Vec::new(); a + b];
    for u in 0..a {
        adj[u] = (a..a + b).map(|v| v as u32).collect();
    }
    for v in a..a + b {
        adj[v] = (0..a).map(|u| u as u32).collect();
    }
    Graph { adj, labels: None }
}

fn circulant(n: usize, offsets: &[usize]) -> Result<Graph> {
    let mut edges = std::collections::BTreeSet::new();
    for &o in offsets {
        if o == 0 || o >= n {
            return Err(Error::InvalidParameter(format!("circulant offset {o} invalid for n = {n}")));
        }
        for i in 0..n {
            let j = (i + o) % n;
            edges.insert((i.min(j), i.max(j)));
        }
    }
    Graph::from_edges(n, edges)
}

/// Claw with each leaf blown up to `K_4`, the centre to `K_37`, and every claw
/// edge replaced by a complete join. Its independence polynomial is
/// `1 + 49x + 48x^2 + 64x^3`.
pub fn aems() -> Graph {
    const CENTER: usize = 37;
    const LEAF: usize = 4;
    let n = CENTER + 3 * LEAF;
    let blocks: Vec<std::ops::Range<usize>> = std::iter::once(0..CENTER)
        .chain((0..3).map(|i| CENTER + i * LEAF..CENTER + (i + 1) * LEAF))
        .collect();
    let mut edges = Vec::new();
    for b in &blocks {
        for u in b.clone() {
            for v in u + 1..b.end {
                edges.push((u, v));
            }
        }
    }
    for leaf in &blocks[1..] {
        for u in blocks[0].clone() {
            for v in leaf.clone() {
                edges.push((u, v));
            }
        }
    }
    let labels = (0..n)
        .map(|v| {
            if v < CENTER {
                format!("c{v}")
            } else {
                let i = v - CENTER;
                format!("l{}_{}", i / LEAF, i % LEAF)
            }
        })
        .collect();
    Graph::from_edges(n, edges)
        .and_then(|g| g.with_labels(labels))
        .expect("aems construction is a simple graph")
}

/// The two colour classes of a bipartite graph, normalized so that
/// `|class_o| >= |class_e|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bipartition {
    class_e: Vec<usize>,
    class_o: Vec<usize>,
    #[serde(skip)]
    in_e: Vec<bool>,
}

impl Bipartition {
    /// Validates a caller-supplied split against `g`, swapping the classes if
    /// needed so that `|O| >= |E|` (on a tie the given `e` stays `E`).
    pub fn from_classes(g: &Graph, e: Vec<usize>, o: Vec<usize>) -> Result<Self> {
        let n = g.order();
        let mut side = vec![None; n];
        for (&v, s) in e.iter().map(|v| (v, true)).chain(o.iter().map(|v| (v, false))) {
            if v >= n || side[v].is_some() {
                return Err(Error::InvalidParameter(format!(
                    "vertex {v} missing from the graph or listed twice"
                )));
            }
            side[v] = Some(s);
        }
        let in_e: Vec<bool> = side
            .into_iter()
            .enumerate()
            .map(|(v, s)| s.ok_or_else(|| Error::InvalidParameter(format!("vertex {v} unassigned"))))
            .collect::<Result<_>>()?;
        if let Some((u, v)) = g.edges().find(|&(u, v)| in_e[u] == in_e[v]) {
            return Err(Error::InvalidParameter(format!("edge ({u}, {v}) inside one class")));
        }
        Ok(Self::normalized(in_e))
    }

    fn normalized(mut in_e: Vec<bool>) -> Self {
        let e_count = in_e.iter().filter(|&&b| b).count();
        if e_count > in_e.len() - e_count {
            in_e.iter_mut().for_each(|b| *b = !*b);
        }
        let class_e = (0..in_e.len()).filter(|&v| in_e[v]).collect();
        let class_o = (0..in_e.len()).filter(|&v| !in_e[v]).collect();
        Self {
            class_e,
            class_o,
            in_e,
        }
    }

    pub fn class_e(&self) -> &[usize] {
        &self.class_e
    }

    pub fn class_o(&self) -> &[usize] {
        &self.class_o
    }

    pub fn is_e(&self, v: usize) -> bool {
        self.in_e[v]
    }

    pub fn class_gap(&self) -> usize {
        self.class_o.len() - self.class_e.len()
    }
}

/// Two-colours `g` by breadth-first layering, one component at a time from
/// its lowest-indexed vertex, which gets the `E` colour. Classes are then
/// swapped if needed so `|O| >= |E|`; on a tie the first colour stays `E`
/// (for `Q_d` that is the even-weight class).
pub fn bipartition(g: &Graph) -> Result<Bipartition> {
    let n = g.order();
    let mut colour: Vec<Option<bool>> = vec![None; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if colour[root].is_some() {
            continue;
        }
        colour[root] = Some(true);
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            let cu = colour[u].unwrap();
            for &w in g.neighbors(u) {
                let w = w as usize;
                match colour[w] {
                    None => {
                        colour[w] = Some(!cu);
                        parent[w] = u;
                        depth[w] = depth[u] + 1;
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cu => {
                        return Err(Error::NotBipartite {
                            witness: odd_cycle(u, w, &parent, &depth),
                        });
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(Bipartition::normalized(
        colour.into_iter().map(|c| c.unwrap()).collect(),
    ))
}

/// Joins the BFS tree paths of a monochromatic edge `(u, w)` into a cycle.
fn odd_cycle(u: usize, w: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let (mut a, mut b) = (u, w);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

/// The summands of `h(G, d)` for a bipartite graph on `2n` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityProfile {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub d: Rational,
    /// Half the vertex count, kept exact for odd orders.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub half_order: Rational,
    pub low_deg_count_e: usize,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub excess_deg_sum_o: Rational,
    pub class_gap: usize,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub h_value: Rational,
}

/// `h(G,d) = 1/d + |{v in E : d(v) < d}|/n + sum_{v in O, d(v) >= d} (d(v)-d)/(dn) + (|O|-|E|)/n`.
pub fn regularity_profile(g: &Graph, b: &Bipartition, d: &Rational) -> Result<RegularityProfile> {
    if *d <= 0 {
        return Err(Error::InvalidParameter(format!("degree parameter must be positive, got {d}")));
    }
    if b.in_e.len() != g.order() {
        return Err(Error::InvalidParameter("bipartition does not match graph".into()));
    }
    if g.order() == 0 {
        return Err(Error::InvalidParameter("h(G,d) undefined on the empty graph".into()));
    }
    let half_order = Rational::from((g.order(), 2));
    let low_deg_count_e = b
        .class_e
        .iter()
        .filter(|&&v| Rational::from(g.degree(v)) < *d)
        .count();
    let mut excess_deg_sum_o = Rational::new();
    for &v in &b.class_o {
        let dv = Rational::from(g.degree(v));
        if dv >= *d {
            excess_deg_sum_o += dv - d;
        }
    }
    let class_gap = b.class_gap();
    let h_value = Rational::from(d.recip_ref())
        + Rational::from(low_deg_count_e) / &half_order
        + Rational::from(&excess_deg_sum_o / Rational::from(d * &half_order))
        + Rational::from(class_gap) / &half_order;
    Ok(RegularityProfile {
        d: d.clone(),
        half_order,
        low_deg_count_e,
        excess_deg_sum_o,
        class_gap,
        h_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        crate::numeric::parse_rational(s).unwrap()
    }

    #[test]
    fn q2_is_four_cycle() {
        let g = hypercube(2);
        assert_eq!((g.order(), g.edge_count()), (4, 4));
        assert_eq!(g.is_regular(), Some(2));
        assert!(g.check_simple());
    }

    #[test]
    fn hypercube_degrees_and_classes() {
        for d in 0..=10 {
            let g = hypercube(d);
            assert_eq!(g.order(), 1 << d);
            assert!(g.check_simple());
            assert!((0..g.order()).all(|v| g.degree(v) == d as usize));
            if d >= 1 {
                let b = bipartition(&g).unwrap();
                assert_eq!(b.class_e().len(), 1 << (d - 1));
                assert!(b.class_e().iter().all(|&v| v.count_ones() % 2 == 0));
            }
        }
    }

    #[test]
    fn specs_round_trip() {
        for s in ["qd:5", "knn:8,8", "cycle:12", "path:3", "aems", "empty:4", "circulant:10,1,3"] {
            assert_eq!(s.parse::<GraphFamily>().unwrap().to_string(), s);
        }
        assert!("qd:-1".parse::<GraphFamily>().is_err());
        assert!("knn:3".parse::<GraphFamily>().is_err());
        assert!("blob:3".parse::<GraphFamily>().is_err());
    }

    #[test]
    fn size_cap_enforced() {
        let err = generate_capped(&GraphFamily::Hypercube(21), DEFAULT_VERTEX_CAP).unwrap_err();
        assert!(matches!(err, Error::SizeCap { .. }));
        assert!(generate(&GraphFamily::Hypercube(64)).is_err());
        assert!(generate(&GraphFamily::Cycle(2)).is_err());
    }

    #[test]
    fn aems_shape() {
        let g = aems();
        assert_eq!(g.order(), 49);
        assert!(g.check_simple());
        assert_eq!(g.labels().unwrap()[37], "l0_0");
        assert!(matches!(bipartition(&g), Err(Error::NotBipartite { .. })));
    }

    #[test]
    fn c4_and_c5() {
        let b = bipartition(&generate(&GraphFamily::Cycle(4)).unwrap()).unwrap();
        assert_eq!((b.class_e().len(), b.class_o().len()), (2, 2));
        let c5 = generate(&GraphFamily::Cycle(5)).unwrap();
        match bipartition(&c5) {
            Err(Error::NotBipartite { witness }) => {
                assert_eq!(witness.len(), 5);
                for i in 0..5 {
                    assert!(c5.has_edge(witness[i], witness[(i + 1) % 5]));
                }
            }
            other => panic!("expected odd cycle, got {other:?}"),
        }
    }

    #[test]
    fn odd_cycle_witness_in_larger_graph() {
        // triangle hanging off a path
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 3)]).unwrap();
        let Err(Error::NotBipartite { witness }) = bipartition(&g) else {
            panic!("triangle not detected")
        };
        assert_eq!(witness.len() % 2, 1);
        for i in 0..witness.len() {
            assert!(g.has_edge(witness[i], witness[(i + 1) % witness.len()]));
        }
    }

    #[test]
    fn regularity_examples() {
        let q4 = hypercube(4);
        let p = regularity_profile(&q4, &bipartition(&q4).unwrap(), &q("4")).unwrap();
        assert_eq!(p.h_value, q("1/4"));

        let k23 = complete_bipartite(2, 3);
        let b = bipartition(&k23).unwrap();
        assert_eq!(b.class_e(), &[0, 1]);
        let p = regularity_profile(&k23, &b, &q("2")).unwrap();
        assert_eq!((p.low_deg_count_e, p.class_gap), (0, 1));
        assert_eq!(p.excess_deg_sum_o, 0);
        assert_eq!(p.half_order, q("5/2"));
        assert_eq!(p.h_value, q("9/10"));

        let star = complete_bipartite(1, 3);
        let p = regularity_profile(&star, &bipartition(&star).unwrap(), &q("1")).unwrap();
        assert_eq!(p.class_gap, 2);
        assert_eq!(p.h_value, q("2"));

        assert!(regularity_profile(&star, &bipartition(&star).unwrap(), &q("0")).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let g = generate(&GraphFamily::Circulant(8, vec![1, 3])).unwrap();
        let mut buf = Vec::new();
        g.write_text(&mut buf).unwrap();
        let back = Graph::read_text(&buf[..]).unwrap();
        assert_eq!(back, g);
        assert!(Graph::read_text(&b"3 1\n0 0\n"[..]).is_err());
        assert!(Graph::read_text(&b"3 2\n0 1\n"[..]).is_err());
        assert!(Graph::read_text(&b"2 1\n0 1\n1 0\n"[..]).is_err());
    }

    #[test]
    fn from_classes_normalizes() {
        let g = complete_bipartite(3, 2);
        let b = Bipartition::from_classes(&g, vec![0, 1, 2], vec![3, 4]).unwrap();
        assert_eq!(b.class_e(), &[3, 4]);
        assert!(Bipartition::from_classes(&g, vec![0, 3], vec![1, 2, 4]).is_err());
    }
}
