//! Per-sequence shuffle null model and positional sign classes.
//!
//! Each realization permutes the signs inside every sequence independently,
//! which keeps sequence lengths, per-sequence sign multisets and the global
//! frequency table fixed while destroying order.
//!
//! Seeding: realization `i` of a plan with master seed `m` is driven by a
//! `ChaCha8Rng` seeded (via `seed_from_u64`) with the `(i + 1)`-th output of
//! a SplitMix64 stream started at `m`. Results therefore do not depend on
//! how realizations are scheduled across threads.

use std::collections::{BTreeMap, HashSet};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Corpus, Sequence, SignId};
use crate::error::{Error, Result};
use crate::network::SignNetwork;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of realization `index` under `master_seed`.
pub fn child_seed(master_seed: u64, index: u64) -> u64 {
    splitmix64_mix(master_seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShufflePlan {
    pub master_seed: u64,
    pub realizations: usize,
}

impl ShufflePlan {
    pub fn new(master_seed: u64, realizations: usize) -> Result<Self> {
        if realizations == 0 {
            return Err(Error::InvalidArgument(
                "realization count must be at least 1".into(),
            ));
        }
        Ok(ShufflePlan {
            master_seed,
            realizations,
        })
    }

    pub fn rng(&self, index: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(child_seed(self.master_seed, index as u64))
    }

    /// Realization `index` as a full corpus.
    pub fn realize(&self, corpus: &Corpus, index: usize) -> Corpus {
        let mut rng = self.rng(index);
        corpus.with_codes(shuffle_codes(corpus.codes(), &mut rng))
    }
}

/// Uniformly random permutation of one sequence.
pub fn shuffle_sequence<R: Rng + ?Sized>(seq: &Sequence, rng: &mut R) -> Sequence {
    let mut signs = seq.signs().to_vec();
    signs.shuffle(rng);
    Sequence::new(signs, seq.source().map(str::to_string)).expect("non-empty")
}

/// Shuffles every sequence independently, in corpus order.
pub fn shuffle_codes<R: Rng + ?Sized>(codes: &[Vec<u32>], rng: &mut R) -> Vec<Vec<u32>> {
    codes
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.shuffle(rng);
            c
        })
        .collect()
}

pub(crate) fn shuffle_codes_into<R: Rng + ?Sized>(
    codes: &[Vec<u32>],
    out: &mut [Vec<u32>],
    rng: &mut R,
) {
    for (src, dst) in codes.iter().zip(out.iter_mut()) {
        dst.clear();
        dst.extend_from_slice(src);
        dst.shuffle(rng);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub mean: f64,
    /// Sample standard deviation (divisor `n - 1`).
    pub std: f64,
    pub values: Vec<f64>,
}

impl EnsembleStats {
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let (mean, std) = mean_std(&values)?;
        Ok(EnsembleStats { mean, std, values })
    }
}

pub(crate) fn mean_std(values: &[f64]) -> Result<(f64, f64)> {
    let n = values.len();
    if n < 2 {
        return Err(Error::Undefined(format!(
            "sample standard deviation needs at least 2 realizations, got {n}"
        )));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    Ok((mean, (ss / (n - 1) as f64).sqrt()))
}

/// Evaluates `metric` on every realization of the plan.
pub fn randomized_metric<F>(corpus: &Corpus, metric: F, plan: &ShufflePlan) -> Result<EnsembleStats>
where
    F: Fn(&Corpus) -> Result<f64> + Sync,
{
    if plan.realizations < 2 {
        return Err(Error::Undefined(
            "sample standard deviation needs at least 2 realizations".into(),
        ));
    }
    let values = (0..plan.realizations)
        .into_par_iter()
        .map(|i| metric(&plan.realize(corpus, i)))
        .collect::<Result<Vec<f64>>>()?;
    EnsembleStats::from_values(values)
}

/// Built-in corpus metrics addressable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedMetric {
    Reciprocity,
    Connectivity,
    /// Distinct directed sign pairs (edges, loops included).
    Pairs,
    Bigrams,
    Solos,
    Beginners,
    Enders,
}

impl NamedMetric {
    pub const ALL: [NamedMetric; 7] = [
        NamedMetric::Reciprocity,
        NamedMetric::Connectivity,
        NamedMetric::Pairs,
        NamedMetric::Bigrams,
        NamedMetric::Solos,
        NamedMetric::Beginners,
        NamedMetric::Enders,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedMetric::Reciprocity => "reciprocity",
            NamedMetric::Connectivity => "connectivity",
            NamedMetric::Pairs => "pairs",
            NamedMetric::Bigrams => "bigrams",
            NamedMetric::Solos => "solos",
            NamedMetric::Beginners => "beginners",
            NamedMetric::Enders => "enders",
        }
    }

    pub fn evaluate(self, corpus: &Corpus) -> Result<f64> {
        match self {
            NamedMetric::Reciprocity => SignNetwork::build(corpus).reciprocity(),
            NamedMetric::Connectivity => SignNetwork::build(corpus).connectivity(),
            NamedMetric::Pairs => Ok(SignNetwork::build(corpus).edge_count() as f64),
            NamedMetric::Bigrams => Ok(corpus.total_bigrams() as f64),
            NamedMetric::Solos => Ok(classify_positions(corpus).solos.len() as f64),
            NamedMetric::Beginners => Ok(classify_positions(corpus).beginners.len() as f64),
            NamedMetric::Enders => Ok(classify_positions(corpus).enders.len() as f64),
        }
    }
}

impl FromStr for NamedMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedMetric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = NamedMetric::ALL.iter().map(|m| m.name()).collect();
                Error::InvalidArgument(format!(
                    "unknown metric {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Positional sign classes. `solos`, `beginners` and `enders` come from
/// network degrees; `dual` and `medial_only` from scanning positions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PositionalClasses {
    /// No in- or out-links: only ever seen alone.
    pub solos: Vec<SignId>,
    /// In-degree 0, out-degree > 0.
    pub beginners: Vec<SignId>,
    /// Out-degree 0, in-degree > 0.
    pub enders: Vec<SignId>,
    /// First sign of some sequence and last sign of some sequence
    /// (both of length >= 2).
    pub dual: Vec<SignId>,
    /// Never the first or last sign of any sequence.
    pub medial_only: Vec<SignId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Beginner,
    Ender,
}

/// Presence of in-links and out-links per sign, straight from the codes.
fn link_flags(n_signs: usize, codes: &[Vec<u32>]) -> (Vec<bool>, Vec<bool>) {
    let mut has_in = vec![false; n_signs];
    let mut has_out = vec![false; n_signs];
    for code in codes {
        for w in code.windows(2) {
            has_out[w[0] as usize] = true;
            has_in[w[1] as usize] = true;
        }
    }
    (has_in, has_out)
}

fn role_members(n_signs: usize, codes: &[Vec<u32>], role: Role) -> Vec<bool> {
    let (has_in, has_out) = link_flags(n_signs, codes);
    (0..n_signs)
        .map(|i| match role {
            Role::Beginner => !has_in[i] && has_out[i],
            Role::Ender => has_in[i] && !has_out[i],
        })
        .collect()
}

pub fn classify_positions(corpus: &Corpus) -> PositionalClasses {
    let inv = corpus.inventory();
    let n = inv.len();
    let codes = corpus.codes();
    let (has_in, has_out) = link_flags(n, codes);
    let mut starts = vec![false; n];
    let mut ends = vec![false; n];
    let mut at_edge = vec![false; n];
    for code in codes {
        let first = code[0] as usize;
        let last = code[code.len() - 1] as usize;
        at_edge[first] = true;
        at_edge[last] = true;
        if code.len() >= 2 {
            starts[first] = true;
            ends[last] = true;
        }
    }
    let mut classes = PositionalClasses::default();
    for i in 0..n {
        let sign = inv[i].clone();
        match (has_in[i], has_out[i]) {
            (false, false) => classes.solos.push(sign.clone()),
            (false, true) => classes.beginners.push(sign.clone()),
            (true, false) => classes.enders.push(sign.clone()),
            (true, true) => {}
        }
        if starts[i] && ends[i] {
            classes.dual.push(sign.clone());
        }
        if !at_edge[i] {
            classes.medial_only.push(sign);
        }
    }
    classes
}

/// Histogram: number of distinct sequences a sign begins (or ends) to the
/// number of signs of that role with that count.
pub fn positional_frequency_distribution(corpus: &Corpus, role: Role) -> BTreeMap<usize, usize> {
    positional_histogram(corpus.inventory().len(), corpus.codes(), role)
}

fn positional_histogram(n_signs: usize, codes: &[Vec<u32>], role: Role) -> BTreeMap<usize, usize> {
    let members = role_members(n_signs, codes, role);
    let mut seen: HashSet<&[u32]> = HashSet::new();
    let mut per_sign = vec![0usize; n_signs];
    for code in codes {
        if code.len() < 2 || !seen.insert(code.as_slice()) {
            continue;
        }
        let at = match role {
            Role::Beginner => code[0],
            Role::Ender => code[code.len() - 1],
        } as usize;
        if members[at] {
            per_sign[at] += 1;
        }
    }
    let mut hist = BTreeMap::new();
    for (i, &count) in per_sign.iter().enumerate() {
        if members[i] {
            *hist.entry(count).or_insert(0) += 1;
        }
    }
    hist
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositionalBin {
    /// Number of distinct sequences begun (ended) by a sign.
    pub sequences: usize,
    /// Signs with that count in the empirical corpus.
    pub empirical: usize,
    pub random_mean: f64,
    pub random_std: f64,
}

/// Empirical histogram next to the per-bin ensemble mean and std.
pub fn randomized_positional_distribution(
    corpus: &Corpus,
    role: Role,
    plan: &ShufflePlan,
) -> Result<Vec<PositionalBin>> {
    if plan.realizations < 2 {
        return Err(Error::Undefined(
            "sample standard deviation needs at least 2 realizations".into(),
        ));
    }
    let n = corpus.inventory().len();
    let empirical = positional_histogram(n, corpus.codes(), role);
    let random: Vec<BTreeMap<usize, usize>> = (0..plan.realizations)
        .into_par_iter()
        .map(|i| {
            let mut rng = plan.rng(i);
            let codes = shuffle_codes(corpus.codes(), &mut rng);
            positional_histogram(n, &codes, role)
        })
        .collect();
    let mut bins: Vec<usize> = empirical.keys().copied().collect();
    for h in &random {
        bins.extend(h.keys().copied());
    }
    bins.sort_unstable();
    bins.dedup();
    bins.into_iter()
        .map(|b| {
            let values: Vec<f64> = random
                .iter()
                .map(|h| h.get(&b).copied().unwrap_or(0) as f64)
                .collect();
            let (random_mean, random_std) = mean_std(&values)?;
            Ok(PositionalBin {
                sequences: b,
                empirical: empirical.get(&b).copied().unwrap_or(0),
                random_mean,
                random_std,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NeverRandomRoles {
    pub beginners: Vec<SignId>,
    pub enders: Vec<SignId>,
}

/// Empirical beginners (enders) that hold that role in none of the
/// realizations.
pub fn never_random_roles(corpus: &Corpus, plan: &ShufflePlan) -> NeverRandomRoles {
    let n = corpus.inventory().len();
    let zero = || (vec![0u32; n], vec![0u32; n]);
    let (b_hits, e_hits) = (0..plan.realizations)
        .into_par_iter()
        .map(|i| {
            let mut rng = plan.rng(i);
            let codes = shuffle_codes(corpus.codes(), &mut rng);
            let (has_in, has_out) = link_flags(n, &codes);
            let b: Vec<u32> = (0..n)
                .map(|s| u32::from(!has_in[s] && has_out[s]))
                .collect();
            let e: Vec<u32> = (0..n)
                .map(|s| u32::from(has_in[s] && !has_out[s]))
                .collect();
            (b, e)
        })
        .reduce(zero, |(mut b1, mut e1), (b2, e2)| {
            for s in 0..n {
                b1[s] += b2[s];
                e1[s] += e2[s];
            }
            (b1, e1)
        });
    let inv = corpus.inventory();
    let emp_b = role_members(n, corpus.codes(), Role::Beginner);
    let emp_e = role_members(n, corpus.codes(), Role::Ender);
    NeverRandomRoles {
        beginners: (0..n)
            .filter(|&s| emp_b[s] && b_hits[s] == 0)
            .map(|s| inv[s].clone())
            .collect(),
        enders: (0..n)
            .filter(|&s| emp_e[s] && e_hits[s] == 0)
            .map(|s| inv[s].clone())
            .collect(),
    }
}
