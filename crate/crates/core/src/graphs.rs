//! Canonical Δ(k, r, s) walk graphs on the bipartite I/J lines, their edge
//! taxonomy, exhaustive checks of the chain lemmas, and the leading-order
//! counts behind the Marčenko–Pastur moments.
//!
//! A graph is given by `f: {1..k+1} → {1..r+1}` and `g: {1..k} → {1..s}`
//! (stored 0-based in vectors, with 1-based vertex labels) with
//! `f(1) = g(1) = f(k+1) = 1` and restricted growth. Its 2k edges are visited
//! in walk order `e_1d, e_1u, ..., e_kd, e_ku`, where the down edge
//! `e_jd = (f(j), g(j))` and the up edge `e_ju = (g(j), f(j+1))`. Two edges
//! coincide when they join the same I-vertex and J-vertex.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest k accepted by [`enumerate_canonical`] and [`leading_moment_counts`].
pub const MAX_ENUM_K: usize = 5;
/// Largest k accepted by [`verify_chain_lemmas`].
pub const MAX_VERIFY_K: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalGraph {
    f: Vec<usize>,
    g: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    Down,
    Up,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub direction: Direction,
    /// 1-based step index j.
    pub step: usize,
    pub i_vertex: usize,
    pub j_vertex: usize,
}

impl Edge {
    pub fn key(&self) -> (usize, usize) {
        (self.i_vertex, self.j_vertex)
    }

    /// Vertex the walk leaves from.
    pub fn tail(&self) -> Vertex {
        match self.direction {
            Direction::Down => Vertex::I(self.i_vertex),
            Direction::Up => Vertex::J(self.j_vertex),
        }
    }

    pub fn touches(&self, v: Vertex) -> bool {
        match v {
            Vertex::I(i) => self.i_vertex == i,
            Vertex::J(j) => self.j_vertex == j,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Vertex {
    I(usize),
    J(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeLabel {
    UpInnovation,
    DownInnovation,
    T3Irregular,
    T3Regular,
    T2,
    T4,
}

impl EdgeLabel {
    pub fn is_innovation(self) -> bool {
        matches!(self, Self::UpInnovation | Self::DownInnovation)
    }

    pub fn is_t3(self) -> bool {
        matches!(self, Self::T3Irregular | Self::T3Regular)
    }

    /// T2 edges are the first appearances among the T4 class.
    pub fn is_t4_class(self) -> bool {
        matches!(self, Self::T2 | Self::T4)
    }

    pub fn code(self) -> &'static str {
        match self {
            Self::UpInnovation => "T1u",
            Self::DownInnovation => "T1d",
            Self::T3Irregular => "T3i",
            Self::T3Regular => "T3r",
            Self::T2 => "T2",
            Self::T4 => "T4",
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

fn is_restricted_growth(seq: &[usize]) -> bool {
    let mut max = 0;
    for &v in seq {
        if v == 0 || v > max + 1 {
            return false;
        }
        max = max.max(v);
    }
    true
}

impl CanonicalGraph {
    /// `f` has length k+1, `g` length k; both 1-based.
    pub fn new(f: Vec<usize>, g: Vec<usize>) -> Result<Self> {
        let k = g.len();
        if k == 0 || f.len() != k + 1 {
            return Err(Error::InvalidArgument(format!(
                "need |f| = |g| + 1 >= 2, got |f| = {}, |g| = {k}",
                f.len()
            )));
        }
        if f[0] != 1 || f[k] != 1 || g[0] != 1 {
            return Err(Error::InvalidArgument("f(1), g(1) and f(k+1) must equal 1".into()));
        }
        if !is_restricted_growth(&f[..k]) || !is_restricted_growth(&g) {
            return Err(Error::InvalidArgument("f and g must have restricted growth".into()));
        }
        Ok(Self { f, g })
    }

    pub fn k(&self) -> usize {
        self.g.len()
    }

    pub fn f(&self) -> &[usize] {
        &self.f
    }

    pub fn g(&self) -> &[usize] {
        &self.g
    }

    /// Number of distinct I-vertices minus one.
    pub fn r(&self) -> usize {
        self.f.iter().max().copied().unwrap_or(1) - 1
    }

    /// Number of distinct J-vertices.
    pub fn s(&self) -> usize {
        self.g.iter().max().copied().unwrap_or(0)
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(2 * self.k());
        for j in 0..self.k() {
            out.push(Edge { direction: Direction::Down, step: j + 1, i_vertex: self.f[j], j_vertex: self.g[j] });
            out.push(Edge { direction: Direction::Up, step: j + 1, i_vertex: self.f[j + 1], j_vertex: self.g[j] });
        }
        out
    }

    /// Multiplicity of every distinct edge.
    pub fn multiplicities(&self) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for e in self.edges() {
            *m.entry(e.key()).or_insert(0) += 1;
        }
        m
    }

    /// Graphs with an edge of multiplicity one contribute nothing to
    /// expected traces of mean-zero entries.
    pub fn has_single_edge(&self) -> bool {
        self.multiplicities().values().any(|&c| c == 1)
    }

    /// Every edge coincides with exactly one other and `r + s = k`.
    pub fn is_leading(&self) -> bool {
        self.r() + self.s() == self.k() && self.multiplicities().values().all(|&c| c == 2)
    }

    pub fn f_string(&self) -> String {
        join(&self.f)
    }

    pub fn g_string(&self) -> String {
        join(&self.g)
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("-")
}

/// Canonical representative of the walk `i_1 j_1 ... i_k j_k i_1`, obtained
/// by relabeling each line in order of first appearance.
pub fn canonical_form(i_seq: &[usize], j_seq: &[usize]) -> Result<CanonicalGraph> {
    if i_seq.len() != j_seq.len() || i_seq.is_empty() {
        return Err(Error::InvalidArgument("index sequences must be non-empty and of equal length".into()));
    }
    fn relabel(seq: &[usize]) -> Vec<usize> {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        seq.iter()
            .map(|&v| {
                let next = seen.len() + 1;
                *seen.entry(v).or_insert(next)
            })
            .collect()
    }
    let mut f = relabel(i_seq);
    f.push(1);
    CanonicalGraph::new(f, relabel(j_seq))
}

fn restricted_growth_strings(len: usize) -> Vec<Vec<usize>> {
    fn extend(cur: &mut Vec<usize>, max: usize, len: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in 1..=max + 1 {
            cur.push(v);
            extend(cur, max.max(v), len, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![1];
    extend(&mut cur, 1, len, &mut out);
    out
}

/// All canonical Δ(k, r, s) graphs, ordered lexicographically by `(f, g)`.
pub fn enumerate_canonical(k: usize) -> Result<Vec<CanonicalGraph>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k > MAX_ENUM_K {
        return Err(Error::GuardExceeded(format!("k = {k} exceeds the enumeration limit {MAX_ENUM_K}")));
    }
    let strings = restricted_growth_strings(k);
    let mut out = Vec::with_capacity(strings.len() * strings.len());
    for fs in &strings {
        let mut f = fs.clone();
        f.push(1);
        for gs in &strings {
            out.push(CanonicalGraph { f: f.clone(), g: gs.clone() });
        }
    }
    Ok(out)
}

/// Sequential edge classification.
///
/// An edge is single up to position b when no other edge among the first b
/// coincides with it; "up to" for T3 tests is exclusive of the edge being
/// labelled.
pub fn classify_edges(graph: &CanonicalGraph) -> Vec<EdgeLabel> {
    let edges = graph.edges();
    let mut labels: Vec<EdgeLabel> = Vec::with_capacity(edges.len());
    let mut max_f = 0;
    let mut max_g = 0;

    for (b, e) in edges.iter().enumerate() {
        let innovation = match e.direction {
            Direction::Down => {
                let new = e.j_vertex == max_g + 1;
                max_g = max_g.max(e.j_vertex);
                // f(j) itself was already seen when the up edge e_{j-1,u} was visited
                max_f = max_f.max(e.i_vertex);
                new
            }
            Direction::Up => {
                let new = e.i_vertex == max_f + 1;
                max_f = max_f.max(e.i_vertex);
                new
            }
        };
        if innovation {
            labels.push(match e.direction {
                Direction::Down => EdgeLabel::DownInnovation,
                Direction::Up => EdgeLabel::UpInnovation,
            });
            continue;
        }

        let earlier: Vec<usize> = (0..b).filter(|&a| edges[a].key() == e.key()).collect();
        let t3 = earlier.len() == 1 && labels[earlier[0]].is_innovation();
        if t3 {
            let tail = e.tail();
            let single_innovations_at_tail = (0..b)
                .filter(|&a| labels[a].is_innovation() && edges[a].touches(tail))
                .filter(|&a| (0..b).filter(|&c| edges[c].key() == edges[a].key()).count() == 1)
                .count();
            labels.push(if single_innovations_at_tail == 1 { EdgeLabel::T3Irregular } else { EdgeLabel::T3Regular });
            continue;
        }

        let seen_as_t4 = earlier.iter().any(|&a| labels[a].is_t4_class());
        labels.push(if seen_as_t4 { EdgeLabel::T4 } else { EdgeLabel::T2 });
    }
    labels
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub f: String,
    pub g: String,
    /// `"chain-I"`, `"chain-J"` or `"regular-T3"`.
    pub check: &'static str,
    /// τ for chain checks, 0 otherwise.
    pub tau: usize,
    /// Left side of the failed inequality.
    pub observed: usize,
    /// Right side of the failed inequality.
    pub bound: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainLemmaReport {
    pub k: usize,
    pub graphs: usize,
    pub chains: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl ChainLemmaReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Innovations among `edges[..len]` that are single within that prefix and
/// touch `v`.
fn single_innovations_at(edges: &[Edge], labels: &[EdgeLabel], len: usize, v: Vertex) -> usize {
    (0..len)
        .filter(|&a| labels[a].is_innovation() && edges[a].touches(v))
        .filter(|&a| (0..len).filter(|&c| edges[c].key() == edges[a].key()).count() == 1)
        .count()
}

/// Exhaustively checks, for every canonical graph with k edge pairs:
/// on every chain prefix `i_1 j_1 ... i_τ` and `i_1 j_1 ... i_τ j_τ`, the
/// number `l` of single innovations touching the chain's last vertex is at
/// most `t + 1` (t = T2 edges in the chain); and the number of regular T3
/// edges is at most twice the number of T2 edges.
pub fn verify_chain_lemmas(k: usize) -> Result<ChainLemmaReport> {
    if k > MAX_VERIFY_K {
        return Err(Error::GuardExceeded(format!("k = {k} exceeds the verification limit {MAX_VERIFY_K}")));
    }
    let graphs = enumerate_canonical(k)?;
    let mut chains = 0;
    let mut counterexamples = Vec::new();
    for graph in &graphs {
        let edges = graph.edges();
        let labels = classify_edges(graph);
        let mut check_chain = |len: usize, end: Vertex, check: &'static str, tau: usize| {
            chains += 1;
            let t = labels[..len].iter().filter(|l| **l == EdgeLabel::T2).count();
            let l = single_innovations_at(&edges, &labels, len, end);
            if l > t + 1 {
                counterexamples.push(Counterexample {
                    f: graph.f_string(),
                    g: graph.g_string(),
                    check,
                    tau,
                    observed: l,
                    bound: t + 1,
                });
            }
        };
        for tau in 1..=k + 1 {
            check_chain(2 * (tau - 1), Vertex::I(graph.f[tau - 1]), "chain-I", tau);
        }
        for tau in 1..=k {
            check_chain(2 * tau - 1, Vertex::J(graph.g[tau - 1]), "chain-J", tau);
        }

        let t2 = labels.iter().filter(|l| **l == EdgeLabel::T2).count();
        let regular = labels.iter().filter(|l| **l == EdgeLabel::T3Regular).count();
        if regular > 2 * t2 {
            counterexamples.push(Counterexample {
                f: graph.f_string(),
                g: graph.g_string(),
                check: "regular-T3",
                tau: 0,
                observed: regular,
                bound: 2 * t2,
            });
        }
    }
    Ok(ChainLemmaReport { k, graphs: graphs.len(), chains, counterexamples })
}

/// Number of leading graphs (all multiplicities two, `r + s = k`) by `s`.
pub fn leading_moment_counts(k: usize) -> Result<BTreeMap<usize, u64>> {
    let mut counts: BTreeMap<usize, u64> = (1..=k).map(|s| (s, 0)).collect();
    for g in enumerate_canonical(k)? {
        if g.is_leading() {
            *counts.entry(g.s()).or_insert(0) += 1;
        }
    }
    Ok(counts)
}
