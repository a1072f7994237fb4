//! Pair z-scores against the per-sequence shuffle null.
//!
//! For an ordered pair `(i, j)` the score compares the empirical relative
//! frequency of `i` immediately followed by `j` with its mean and sample
//! standard deviation over the shuffle ensemble. The relative-frequency
//! denominator is the corpus bigram total, which shuffling does not change,
//! so scores are computed on raw counts.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Corpus, SignId};
use crate::ensemble::{shuffle_codes_into, ShufflePlan};
use crate::error::{Error, Result};
use crate::network::SignNetwork;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZRow {
    pub from: SignId,
    pub to: SignId,
    pub count: u64,
    pub p_emp: f64,
    pub mean: f64,
    pub std: f64,
    /// `+inf`/`-inf` when the null is constant and differs from the data.
    pub z: f64,
}

impl ZRow {
    pub fn flag(&self) -> &'static str {
        if self.z == f64::INFINITY {
            "+inf"
        } else if self.z == f64::NEG_INFINITY {
            "-inf"
        } else {
            ""
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZScoreTable {
    rows: Vec<ZRow>,
    #[serde(skip)]
    index: HashMap<(SignId, SignId), usize>,
    pub total_bigrams: u64,
    pub realizations: usize,
    pub master_seed: u64,
}

impl PartialEq for ZScoreTable {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.total_bigrams == other.total_bigrams
            && self.realizations == other.realizations
            && self.master_seed == other.master_seed
    }
}

impl ZScoreTable {
    fn from_rows(
        rows: Vec<ZRow>,
        total_bigrams: u64,
        realizations: usize,
        master_seed: u64,
    ) -> Self {
        let index = rows
            .iter()
            .enumerate()
            .map(|(i, r)| ((r.from.clone(), r.to.clone()), i))
            .collect();
        ZScoreTable {
            rows,
            index,
            total_bigrams,
            realizations,
            master_seed,
        }
    }

    /// A table holding only z values, for driving segmentation directly.
    pub fn from_scores<I>(scores: I) -> Self
    where
        I: IntoIterator<Item = (SignId, SignId, f64)>,
    {
        let mut rows: Vec<ZRow> = scores
            .into_iter()
            .map(|(from, to, z)| ZRow {
                from,
                to,
                count: 0,
                p_emp: 0.0,
                mean: 0.0,
                std: 0.0,
                z,
            })
            .collect();
        rows.sort_by(|a, b| (&a.from, &a.to).cmp(&(&b.from, &b.to)));
        rows.dedup_by(|a, b| a.from == b.from && a.to == b.to);
        Self::from_rows(rows, 0, 0, 0)
    }

    /// Rows in ascending `(from, to)` order.
    pub fn rows(&self) -> &[ZRow] {
        &self.rows
    }

    pub fn get(&self, from: &SignId, to: &SignId) -> Option<&ZRow> {
        self.index
            .get(&(from.clone(), to.clone()))
            .map(|&i| &self.rows[i])
    }

    pub fn z(&self, from: &SignId, to: &SignId) -> Option<f64> {
        self.get(from, to).map(|r| r.z)
    }

    /// Rows with `z > z_c`; `+inf` rows always count.
    pub fn count_above(&self, z_c: f64) -> usize {
        self.rows.iter().filter(|r| r.z > z_c).count()
    }
}

enum PairIndex {
    Dense { n: usize, slots: Vec<u32> },
    Sparse(HashMap<(u32, u32), u32>),
}

const DENSE_LIMIT: usize = 1 << 24;

impl PairIndex {
    fn new(n: usize, pairs: &[(u32, u32)]) -> Self {
        if n * n <= DENSE_LIMIT {
            let mut slots = vec![u32::MAX; n * n];
            for (k, &(a, b)) in pairs.iter().enumerate() {
                slots[a as usize * n + b as usize] = k as u32;
            }
            PairIndex::Dense { n, slots }
        } else {
            PairIndex::Sparse(
                pairs
                    .iter()
                    .enumerate()
                    .map(|(k, &p)| (p, k as u32))
                    .collect(),
            )
        }
    }

    #[inline]
    fn get(&self, a: u32, b: u32) -> Option<usize> {
        match self {
            PairIndex::Dense { n, slots } => {
                let s = slots[a as usize * n + b as usize];
                (s != u32::MAX).then_some(s as usize)
            }
            PairIndex::Sparse(map) => map.get(&(a, b)).map(|&k| k as usize),
        }
    }
}

/// Every ordered pair that some shuffle of some sequence could place side by side.
fn possible_pairs(codes: &[Vec<u32>]) -> Vec<(u32, u32)> {
    let mut set = std::collections::BTreeSet::new();
    for code in codes {
        for (p, &a) in code.iter().enumerate() {
            for (q, &b) in code.iter().enumerate() {
                if p != q {
                    set.insert((a, b));
                }
            }
        }
    }
    set.into_iter().collect()
}

#[derive(Clone, Default)]
struct Moments {
    sum: Vec<u64>,
    sum_sq: Vec<u64>,
}

impl Moments {
    fn zeros(k: usize) -> Self {
        Moments {
            sum: vec![0; k],
            sum_sq: vec![0; k],
        }
    }

    fn merge(mut self, other: Moments) -> Moments {
        for (a, b) in self.sum.iter_mut().zip(other.sum) {
            *a += b;
        }
        for (a, b) in self.sum_sq.iter_mut().zip(other.sum_sq) {
            *a += b;
        }
        self
    }
}

/// Z-scores of the pairs observed in the corpus.
pub fn pair_zscores(corpus: &Corpus, plan: &ShufflePlan) -> Result<ZScoreTable> {
    pair_zscores_with(corpus, plan, false)
}

/// Like [`pair_zscores`]; with `include_absent` every pair that a shuffle
/// could produce gets a row, including pairs never observed.
pub fn pair_zscores_with(
    corpus: &Corpus,
    plan: &ShufflePlan,
    include_absent: bool,
) -> Result<ZScoreTable> {
    let total = corpus.total_bigrams();
    if total == 0 {
        return Err(Error::Undefined("corpus has no adjacent sign pairs".into()));
    }
    let r = plan.realizations;
    if r < 2 {
        return Err(Error::Undefined(
            "sample standard deviation needs at least 2 realizations".into(),
        ));
    }
    let net = SignNetwork::build(corpus);
    let observed: BTreeMap<(u32, u32), u64> = net.edges().clone();
    let pairs: Vec<(u32, u32)> = if include_absent {
        possible_pairs(corpus.codes())
    } else {
        observed.keys().copied().collect()
    };
    let k = pairs.len();
    let index = PairIndex::new(corpus.inventory().len(), &pairs);
    let codes = corpus.codes();

    let chunk = r.div_ceil(rayon::current_num_threads().max(1) * 4).max(1);
    let moments = (0..r)
        .into_par_iter()
        .with_min_len(chunk)
        .fold(
            || (Moments::zeros(k), vec![0u32; k], codes.to_vec()),
            |(mut m, mut counts, mut buf), i| {
                let mut rng = plan.rng(i);
                shuffle_codes_into(codes, &mut buf, &mut rng);
                counts.iter_mut().for_each(|c| *c = 0);
                for code in &buf {
                    for w in code.windows(2) {
                        if let Some(slot) = index.get(w[0], w[1]) {
                            counts[slot] += 1;
                        }
                    }
                }
                for (slot, &c) in counts.iter().enumerate() {
                    if c > 0 {
                        let c = c as u64;
                        m.sum[slot] += c;
                        m.sum_sq[slot] += c * c;
                    }
                }
                (m, counts, buf)
            },
        )
        .map(|(m, _, _)| m)
        .reduce(|| Moments::zeros(k), Moments::merge);

    let inv = corpus.inventory();
    let rf = r as f64;
    let tf = total as f64;
    let rows = pairs
        .iter()
        .enumerate()
        .map(|(slot, &(a, b))| {
            let count = observed.get(&(a, b)).copied().unwrap_or(0);
            let sum = moments.sum[slot];
            let var_num = r as u128 * moments.sum_sq[slot] as u128 - (sum as u128) * (sum as u128);
            let mean_c = sum as f64 / rf;
            let std_c = (var_num as f64 / (rf * (rf - 1.0))).sqrt();
            let z = if var_num == 0 {
                let lhs = count as u128 * r as u128;
                match lhs.cmp(&(sum as u128)) {
                    std::cmp::Ordering::Equal => 0.0,
                    std::cmp::Ordering::Greater => f64::INFINITY,
                    std::cmp::Ordering::Less => f64::NEG_INFINITY,
                }
            } else {
                (count as f64 - mean_c) / std_c
            };
            ZRow {
                from: inv[a as usize].clone(),
                to: inv[b as usize].clone(),
                count,
                p_emp: count as f64 / tf,
                mean: mean_c / tf,
                std: std_c / tf,
                z,
            }
        })
        .collect();
    Ok(ZScoreTable::from_rows(rows, total, r, plan.master_seed))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZCdf {
    /// `(z, fraction of finite rows with z-value >= z)` at each distinct finite z.
    pub points: Vec<(f64, f64)>,
    pub positive_infinite: usize,
    pub negative_infinite: usize,
}

pub fn zscore_cdf(table: &ZScoreTable) -> ZCdf {
    let mut finite: Vec<f64> = table
        .rows
        .iter()
        .map(|r| r.z)
        .filter(|z| z.is_finite())
        .collect();
    finite.sort_by(f64::total_cmp);
    let n = finite.len() as f64;
    let mut points = Vec::new();
    let mut i = 0;
    while i < finite.len() {
        let v = finite[i];
        points.push((v, (finite.len() - i) as f64 / n));
        while i < finite.len() && finite[i] == v {
            i += 1;
        }
    }
    ZCdf {
        points,
        positive_infinite: table.rows.iter().filter(|r| r.z == f64::INFINITY).count(),
        negative_infinite: table
            .rows
            .iter()
            .filter(|r| r.z == f64::NEG_INFINITY)
            .count(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignificantNetwork {
    pub network: SignNetwork,
    /// Weakly connected components, each sorted.
    pub components: Vec<Vec<SignId>>,
}

/// Observed pairs with `z > z_c`, weighted by their empirical counts.
pub fn significant_network(table: &ZScoreTable, z_c: f64) -> Result<SignificantNetwork> {
    if !z_c.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "z threshold must be finite, got {z_c}"
        )));
    }
    let kept: Vec<&ZRow> = table
        .rows
        .iter()
        .filter(|r| r.count >= 1 && r.z > z_c)
        .collect();
    let mut nodes: Vec<SignId> = kept
        .iter()
        .flat_map(|r| [r.from.clone(), r.to.clone()])
        .collect();
    nodes.sort();
    nodes.dedup();
    let pos = |s: &SignId| nodes.binary_search(s).unwrap() as u32;
    let edges: BTreeMap<(u32, u32), u64> = kept
        .iter()
        .map(|r| ((pos(&r.from), pos(&r.to)), r.count))
        .collect();
    let network = SignNetwork::from_edges(nodes.clone(), edges);
    let components = network.weak_components();
    Ok(SignificantNetwork {
        network,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tests::corpus;

    fn id(s: &str) -> SignId {
        SignId::new(s).unwrap()
    }

    #[test]
    fn single_pair_scores_one() {
        let c = corpus(&["A B"]);
        let plan = ShufflePlan::new(17, 20_000).unwrap();
        let t = pair_zscores(&c, &plan).unwrap();
        assert_eq!(t.rows().len(), 1);
        let row = &t.rows()[0];
        assert_eq!(row.p_emp, 1.0);
        // Exact null: Bernoulli(1/2) count, mean 0.5, std 0.5, z = 1.
        assert!((row.mean - 0.5).abs() < 0.02, "{row:?}");
        assert!((row.std - 0.5).abs() < 0.01, "{row:?}");
        assert!((row.z - 1.0).abs() < 0.05, "{row:?}");
    }

    #[test]
    fn absent_but_possible_pair_is_negative() {
        let c = corpus(&["A B", "A B", "A B C"]);
        let plan = ShufflePlan::new(3, 2_000).unwrap();
        let t = pair_zscores_with(&c, &plan, true).unwrap();
        let ba = t.get(&id("B"), &id("A")).unwrap();
        assert_eq!(ba.count, 0);
        assert!(ba.z < 0.0);
        assert!(t.get(&id("A"), &id("B")).unwrap().z > 0.0);
        let observed_only = pair_zscores(&c, &plan).unwrap();
        assert!(observed_only.get(&id("B"), &id("A")).is_none());
    }

    #[test]
    fn constant_null_gives_zero_or_flag() {
        // A repeated sign: every shuffle of "A A" is "A A".
        let c = corpus(&["A A", "B C"]);
        let plan = ShufflePlan::new(1, 50).unwrap();
        let t = pair_zscores(&c, &plan).unwrap();
        let aa = t.get(&id("A"), &id("A")).unwrap();
        assert_eq!(aa.std, 0.0);
        assert_eq!(aa.z, 0.0);
        assert_eq!(aa.flag(), "");
    }

    #[test]
    fn no_bigrams_is_an_error() {
        let c = corpus(&["A", "B"]);
        let plan = ShufflePlan::new(1, 10).unwrap();
        assert!(matches!(pair_zscores(&c, &plan), Err(Error::Undefined(_))));
    }

    #[test]
    fn table_is_deterministic() {
        let c = corpus(&["A B C D", "C A B", "D B A C", "B C"]);
        let plan = ShufflePlan::new(7, 300).unwrap();
        assert_eq!(
            pair_zscores(&c, &plan).unwrap(),
            pair_zscores(&c, &plan).unwrap()
        );
    }

    #[test]
    fn dense_and_sparse_index_agree() {
        let pairs = vec![(0, 1), (2, 2), (3, 0)];
        let dense = PairIndex::new(4, &pairs);
        let sparse = PairIndex::Sparse(
            pairs
                .iter()
                .enumerate()
                .map(|(k, &p)| (p, k as u32))
                .collect(),
        );
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(dense.get(a, b), sparse.get(a, b));
            }
        }
    }

    #[test]
    fn cdf_of_three_scores() {
        let t = ZScoreTable::from_scores([
            (id("A"), id("B"), 1.0),
            (id("B"), id("C"), 2.0),
            (id("C"), id("D"), 3.0),
            (id("D"), id("E"), f64::INFINITY),
        ]);
        let cdf = zscore_cdf(&t);
        assert_eq!(
            cdf.points,
            vec![(1.0, 1.0), (2.0, 2.0 / 3.0), (3.0, 1.0 / 3.0)]
        );
        assert_eq!(cdf.positive_infinite, 1);
        assert_eq!(t.count_above(2.5), 2);
    }

    fn with_counts(scores: &[(&str, &str, f64)]) -> ZScoreTable {
        let mut t = ZScoreTable::from_scores(scores.iter().map(|&(a, b, z)| (id(a), id(b), z)));
        for r in &mut t.rows {
            r.count = 1;
        }
        t
    }

    #[test]
    fn significant_components() {
        let t = with_counts(&[
            ("A", "B", 9.0),
            ("B", "C", 9.0),
            ("D", "E", 9.0),
            ("E", "F", 1.0),
        ]);
        let sig = significant_network(&t, 8.0).unwrap();
        assert_eq!(sig.network.edge_count(), 3);
        assert_eq!(
            sig.components,
            vec![vec![id("A"), id("B"), id("C")], vec![id("D"), id("E")]]
        );
        let none = significant_network(&t, 100.0).unwrap();
        assert_eq!(none.network.edge_count(), 0);
        assert!(none.components.is_empty());
        assert!(significant_network(&t, f64::NAN).is_err());
    }

    #[test]
    fn infinite_rows_are_significant() {
        let t = with_counts(&[("A", "B", f64::INFINITY), ("B", "C", 2.0)]);
        let sig = significant_network(&t, 8.0).unwrap();
        assert_eq!(sig.network.edge_count(), 1);
    }
}
