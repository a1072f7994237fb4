//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use glyphnet_core::synthgen::PhraseGrammar;
use glyphnet_core::{Corpus, Sequence, SignId};
use rand::Rng;

pub fn corpus(lines: &[&str]) -> Corpus {
    Corpus::parse(&lines.join("\n")).unwrap()
}

pub fn sid(s: &str) -> SignId {
    SignId::new(s).unwrap()
}

type Pair = (String, String);

/// Exact moments of one pair's count under independent uniform
/// per-sequence permutations.
#[derive(Clone, Copy, Debug, Default)]
pub struct PairMoments {
    pub mean: f64,
    pub var: f64,
    /// Fourth central moment of the corpus-wide count.
    pub mu4: f64,
}

fn permutations(items: &[String]) -> Vec<Vec<String>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// Enumerates every ordering of every sequence (all `n!` of them, so repeated
/// signs are weighted correctly) and combines the per-sequence count
/// distributions, which are independent.
pub fn enumerate_pair_moments(lines: &[&str]) -> BTreeMap<(String, String), PairMoments> {
    // per pair: list of per-sequence (mean, var, mu4)
    let mut per_seq: Vec<BTreeMap<Pair, (f64, f64, f64)>> = Vec::new();
    let mut all_pairs = BTreeSet::new();
    for line in lines {
        let signs: Vec<String> = line.split(' ').map(str::to_string).collect();
        let perms = permutations(&signs);
        let total = perms.len() as f64;
        let mut counts: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
        for (k, p) in perms.iter().enumerate() {
            for w in p.windows(2) {
                let v = counts
                    .entry((w[0].clone(), w[1].clone()))
                    .or_insert_with(|| vec![0.0; perms.len()]);
                v[k] += 1.0;
            }
        }
        let mut moments = BTreeMap::new();
        for (pair, values) in counts {
            let mean = values.iter().sum::<f64>() / total;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / total;
            let mu4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / total;
            all_pairs.insert(pair.clone());
            moments.insert(pair, (mean, var, mu4));
        }
        per_seq.push(moments);
    }
    let mut out = BTreeMap::new();
    for pair in all_pairs {
        let parts: Vec<(f64, f64, f64)> = per_seq
            .iter()
            .map(|m| m.get(&pair).copied().unwrap_or((0.0, 0.0, 0.0)))
            .collect();
        let mean = parts.iter().map(|p| p.0).sum();
        let var: f64 = parts.iter().map(|p| p.1).sum();
        let sum_sq: f64 = parts.iter().map(|p| p.1 * p.1).sum();
        let cross = (var * var - sum_sq) / 2.0;
        let mu4 = parts.iter().map(|p| p.2).sum::<f64>() + 6.0 * cross;
        out.insert(pair, PairMoments { mean, var, mu4 });
    }
    out
}

/// Observed counts of each adjacent pair.
pub fn observed_pairs(lines: &[&str]) -> BTreeMap<(String, String), u64> {
    let mut out = BTreeMap::new();
    for line in lines {
        let signs: Vec<&str> = line.split(' ').collect();
        for w in signs.windows(2) {
            *out.entry((w[0].to_string(), w[1].to_string())).or_insert(0) += 1;
        }
    }
    out
}

/// A weighted digraph on nodes `0..n`; `(a, b) -> w` means `w` bigrams `a b`.
#[derive(Clone, Debug)]
pub struct Graph {
    pub n: usize,
    pub edges: BTreeMap<(usize, usize), u64>,
}

pub fn node_name(i: usize) -> String {
    format!("N{i:03}")
}

impl Graph {
    pub fn random<R: Rng>(rng: &mut R, n: usize, p: f64, max_weight: u64) -> Graph {
        let mut edges = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                if rng.random_bool(p) {
                    edges.insert((a, b), rng.random_range(1..=max_weight));
                }
            }
        }
        Graph { n, edges }
    }

    /// Corpus whose network is exactly this graph: one two-sign sequence per
    /// unit of weight plus a solo line per node so isolated nodes exist.
    pub fn to_corpus(&self) -> Corpus {
        let mut seqs = Vec::new();
        for i in 0..self.n {
            seqs.push(Sequence::new(vec![sid(&node_name(i))], None).unwrap());
        }
        for (&(a, b), &w) in &self.edges {
            for _ in 0..w {
                seqs.push(
                    Sequence::new(vec![sid(&node_name(a)), sid(&node_name(b))], None).unwrap(),
                );
            }
        }
        Corpus::from_sequences(seqs)
    }

    /// In-subset degree (`strength == false`) or strength of `v`.
    fn score(&self, members: &[bool], v: usize, outward: bool, strength: bool) -> u64 {
        self.edges
            .iter()
            .filter(|(&(a, b), _)| {
                if outward {
                    a == v && members[b]
                } else {
                    b == v && members[a]
                }
            })
            .map(|(_, &w)| if strength { w } else { 1 })
            .sum()
    }

    /// Largest node set in which every member scores at least `threshold`,
    /// found as the union of all qualifying subsets.
    pub fn brute_core(&self, threshold: u64, outward: bool, strength: bool) -> Vec<String> {
        assert!(self.n <= 16);
        let mut union = vec![false; self.n];
        for mask in 1u32..(1 << self.n) {
            let members: Vec<bool> = (0..self.n).map(|i| mask & (1 << i) != 0).collect();
            let ok = (0..self.n)
                .filter(|&v| members[v])
                .all(|v| self.score(&members, v, outward, strength) >= threshold);
            if ok {
                for v in 0..self.n {
                    union[v] |= members[v];
                }
            }
        }
        (0..self.n).filter(|&v| union[v]).map(node_name).collect()
    }
}

/// Four phrase classes of six three-sign phrases each, every class present
/// in every sequence: twelve signs per sequence.
pub fn four_phrase_grammar() -> PhraseGrammar {
    let names = ["INITIAL", "MEDIAL_A", "MEDIAL_B", "TERMINAL"];
    let classes = names
        .iter()
        .enumerate()
        .map(|(c, name)| {
            let phrases: Vec<Vec<SignId>> = (0..6)
                .map(|p| (0..3).map(|k| sid(&format!("G{c}{p}{k}"))).collect())
                .collect();
            (name.to_string(), phrases, vec![1.0; 6])
        })
        .collect();
    let template = names.iter().map(|n| (n.to_string(), 1.0)).collect();
    PhraseGrammar::new(classes, template).unwrap()
}
