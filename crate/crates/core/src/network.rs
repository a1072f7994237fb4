//! Directed weighted adjacency network of signs.
//!
//! An edge `a -> b` means sign `b` immediately follows sign `a` in reading
//! order; its weight is the number of such adjacent occurrences in the
//! corpus. Repeated signs (`a a`) produce self-loops.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, SignId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    In,
    Out,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::In => "in",
            Direction::Out => "out",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignNetwork {
    nodes: Vec<SignId>,
    edges: BTreeMap<(u32, u32), u64>,
    out_adj: Vec<Vec<(u32, u64)>>,
    in_adj: Vec<Vec<(u32, u64)>>,
}

impl SignNetwork {
    /// Builds the network over the corpus inventory. Node `i` is
    /// `corpus.inventory()[i]`, so signs that only occur alone stay as
    /// isolated nodes.
    pub fn build(corpus: &Corpus) -> Self {
        Self::from_codes(corpus.inventory().to_vec(), corpus.codes())
    }

    pub(crate) fn from_codes(nodes: Vec<SignId>, codes: &[Vec<u32>]) -> Self {
        let mut edges = BTreeMap::new();
        for code in codes {
            for w in code.windows(2) {
                *edges.entry((w[0], w[1])).or_insert(0u64) += 1;
            }
        }
        Self::from_edges(nodes, edges)
    }

    /// Nodes must already be sorted; every edge endpoint must index `nodes`.
    pub(crate) fn from_edges(nodes: Vec<SignId>, edges: BTreeMap<(u32, u32), u64>) -> Self {
        let n = nodes.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (&(a, b), &w) in &edges {
            debug_assert!(w >= 1);
            out_adj[a as usize].push((b, w));
            in_adj[b as usize].push((a, w));
        }
        SignNetwork {
            nodes,
            edges,
            out_adj,
            in_adj,
        }
    }

    pub fn nodes(&self) -> &[SignId] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Distinct directed edges, self-loops included.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn loop_count(&self) -> usize {
        self.edges.keys().filter(|(a, b)| a == b).count()
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.values().sum()
    }

    /// Edges keyed by node index, in ascending (source, target) order.
    pub fn edges(&self) -> &BTreeMap<(u32, u32), u64> {
        &self.edges
    }

    pub fn weight(&self, from: u32, to: u32) -> u64 {
        self.edges.get(&(from, to)).copied().unwrap_or(0)
    }

    pub fn index_of(&self, sign: &SignId) -> Option<u32> {
        self.nodes.binary_search(sign).ok().map(|i| i as u32)
    }

    /// Neighbours with edge weights in the given direction.
    pub fn neighbors(&self, node: u32, direction: Direction) -> &[(u32, u64)] {
        match direction {
            Direction::Out => &self.out_adj[node as usize],
            Direction::In => &self.in_adj[node as usize],
        }
    }

    pub fn degree(&self, node: u32, direction: Direction) -> u64 {
        self.neighbors(node, direction).len() as u64
    }

    pub fn strength(&self, node: u32, direction: Direction) -> u64 {
        self.neighbors(node, direction)
            .iter()
            .map(|&(_, w)| w)
            .sum()
    }

    pub fn degrees(&self, direction: Direction) -> Vec<u64> {
        (0..self.nodes.len() as u32)
            .map(|i| self.degree(i, direction))
            .collect()
    }

    pub fn strengths(&self, direction: Direction) -> Vec<u64> {
        (0..self.nodes.len() as u32)
            .map(|i| self.strength(i, direction))
            .collect()
    }

    /// Fraction of non-loop edges whose reverse edge also exists.
    pub fn reciprocity(&self) -> Result<f64> {
        let mut links = 0usize;
        let mut bidirectional = 0usize;
        for &(a, b) in self.edges.keys() {
            if a == b {
                continue;
            }
            links += 1;
            if self.edges.contains_key(&(b, a)) {
                bidirectional += 1;
            }
        }
        if links == 0 {
            return Err(Error::Undefined(
                "reciprocity of a network without non-loop edges".into(),
            ));
        }
        Ok(bidirectional as f64 / links as f64)
    }

    /// Distinct edges (loops included) over `N^2`.
    pub fn connectivity(&self) -> Result<f64> {
        let n = self.nodes.len();
        if n == 0 {
            return Err(Error::Undefined("connectivity of an empty network".into()));
        }
        Ok(self.edges.len() as f64 / (n as f64 * n as f64))
    }

    /// Complementary CDF of node degrees, anchored at `k = 0`.
    pub fn degree_distribution(&self, direction: Direction) -> Vec<(u64, f64)> {
        anchored_ccdf(&self.degrees(direction))
    }

    /// Complementary CDF of node strengths, anchored at `s = 0`.
    pub fn strength_distribution(&self, direction: Direction) -> Vec<(u64, f64)> {
        anchored_ccdf(&self.strengths(direction))
    }

    /// Connectivity of the sub-network induced by `members` (node indices).
    pub fn induced_connectivity(&self, members: &[u32]) -> Result<f64> {
        if members.is_empty() {
            return Err(Error::Undefined("connectivity of an empty node set".into()));
        }
        let mut inside = vec![false; self.nodes.len()];
        for &m in members {
            inside[m as usize] = true;
        }
        let edges = self
            .edges
            .keys()
            .filter(|&&(a, b)| inside[a as usize] && inside[b as usize])
            .count();
        let q = members.len() as f64;
        Ok(edges as f64 / (q * q))
    }

    /// Weakly connected components, each sorted, ordered by their smallest member.
    pub fn weak_components(&self) -> Vec<Vec<SignId>> {
        let n = self.nodes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in self.edges.keys() {
            let ra = find(&mut parent, a as usize);
            let rb = find(&mut parent, b as usize);
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: BTreeMap<usize, Vec<SignId>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(self.nodes[i].clone());
        }
        groups.into_values().collect()
    }

    /// Graphviz rendering with a `weight` attribute on every edge.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {} {{", dot_id(name));
        for node in &self.nodes {
            let _ = writeln!(out, "  {};", dot_id(node.as_str()));
        }
        for (&(a, b), &w) in &self.edges {
            let _ = writeln!(
                out,
                "  {} -> {} [weight={}];",
                dot_id(self.nodes[a as usize].as_str()),
                dot_id(self.nodes[b as usize].as_str()),
                w
            );
        }
        out.push_str("}\n");
        out
    }
}

fn dot_id(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        if ch == '"' || ch == '\\' {
            out.push('\\');
        }
        out.push(ch);
    }
    out.push('"');
    out
}

/// Points `(v, fraction of values >= v)` at every distinct value.
pub fn complementary_cdf(values: &[u64]) -> Vec<(u64, f64)> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let total = sorted.len() as f64;
    let mut points = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let v = sorted[i];
        points.push((v, (sorted.len() - i) as f64 / total));
        while i < sorted.len() && sorted[i] == v {
            i += 1;
        }
    }
    points
}

fn anchored_ccdf(values: &[u64]) -> Vec<(u64, f64)> {
    let mut points = complementary_cdf(values);
    if points.first().is_none_or(|&(v, _)| v != 0) {
        points.insert(0, (0, 1.0));
    }
    points
}

/// Evaluates a step complementary CDF at `x`.
pub fn ccdf_at(points: &[(u64, f64)], x: u64) -> f64 {
    match points.iter().find(|&&(v, _)| v >= x) {
        Some(&(_, p)) => p,
        None => 0.0,
    }
}

/// Connectivity of the sub-network of the `q` most frequent signs.
pub fn top_q_connectivity(corpus: &Corpus, q: usize) -> Result<f64> {
    let n = corpus.inventory().len();
    if q < 2 || q > n {
        return Err(Error::InvalidArgument(format!(
            "q must lie in 2..={n}, got {q}"
        )));
    }
    let net = SignNetwork::build(corpus);
    let ranked = corpus.ranked_codes();
    net.induced_connectivity(&ranked[..q])
}

/// `(q, connectivity)` for every `q` in `2..=N`, computed incrementally.
pub fn top_q_curve(corpus: &Corpus, net: &SignNetwork) -> Vec<(usize, f64)> {
    let ranked = corpus.ranked_codes();
    let mut inside = vec![false; net.node_count()];
    let mut edges = 0usize;
    let mut curve = Vec::new();
    for (idx, &node) in ranked.iter().enumerate() {
        inside[node as usize] = true;
        for &(m, _) in net.neighbors(node, Direction::Out) {
            if inside[m as usize] {
                edges += 1;
            }
        }
        for &(m, _) in net.neighbors(node, Direction::In) {
            if inside[m as usize] && m != node {
                edges += 1;
            }
        }
        let q = idx + 1;
        if q >= 2 {
            curve.push((q, edges as f64 / (q as f64 * q as f64)));
        }
    }
    curve
}
