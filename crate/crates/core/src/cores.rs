//! k-core and s-core decomposition of the directed sign network.
//!
//! A core of order `t` is the largest node set in which every member has
//! in-degree (out-degree, in-strength, out-strength) at least `t` counting
//! only links to other members. A self-loop counts for its node as long as
//! the node survives.

use std::collections::BTreeMap;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Corpus, SignId};
use crate::ensemble::{mean_std, ShufflePlan};
use crate::error::{Error, Result};
use crate::network::{Direction, SignNetwork};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoreMode {
    Degree,
    Strength,
}

impl CoreMode {
    pub fn name(self) -> &'static str {
        match self {
            CoreMode::Degree => "degree",
            CoreMode::Strength => "strength",
        }
    }
}

impl FromStr for CoreMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "degree" => Ok(CoreMode::Degree),
            "strength" => Ok(CoreMode::Strength),
            _ => Err(Error::InvalidArgument(format!("unknown core mode {s:?}"))),
        }
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "in" => Ok(Direction::In),
            "out" => Ok(Direction::Out),
            _ => Err(Error::InvalidArgument(format!("unknown direction {s:?}"))),
        }
    }
}

fn contribution(weight: u64, mode: CoreMode) -> u64 {
    match mode {
        CoreMode::Degree => 1,
        CoreMode::Strength => weight,
    }
}

/// Removes nodes from `alive` until every survivor meets `threshold`.
fn peel(
    net: &SignNetwork,
    alive: &mut [bool],
    threshold: u64,
    direction: Direction,
    mode: CoreMode,
) {
    let n = net.node_count();
    let mut value = vec![0u64; n];
    for v in 0..n {
        if alive[v] {
            value[v] = net
                .neighbors(v as u32, direction)
                .iter()
                .filter(|&&(u, _)| alive[u as usize])
                .map(|&(_, w)| contribution(w, mode))
                .sum();
        }
    }
    let mut stack: Vec<u32> = (0..n as u32)
        .filter(|&v| alive[v as usize] && value[v as usize] < threshold)
        .collect();
    // Nodes that count `v` among their neighbours in `direction` sit on the
    // opposite adjacency list of `v`.
    let reverse = match direction {
        Direction::Out => Direction::In,
        Direction::In => Direction::Out,
    };
    while let Some(v) = stack.pop() {
        if !alive[v as usize] {
            continue;
        }
        alive[v as usize] = false;
        for &(x, w) in net.neighbors(v, reverse) {
            let xi = x as usize;
            if x == v || !alive[xi] {
                continue;
            }
            let before = value[xi];
            value[xi] -= contribution(w, mode);
            if before >= threshold && value[xi] < threshold {
                stack.push(x);
            }
        }
    }
}

fn members(net: &SignNetwork, alive: &[bool]) -> Vec<SignId> {
    alive
        .iter()
        .enumerate()
        .filter(|&(_, &a)| a)
        .map(|(i, _)| net.nodes()[i].clone())
        .collect()
}

fn core_mask(net: &SignNetwork, order: u64, direction: Direction, mode: CoreMode) -> Vec<bool> {
    let mut alive = vec![true; net.node_count()];
    peel(net, &mut alive, order, direction, mode);
    alive
}

/// Nodes of the degree core of order `k`, sorted.
pub fn k_core(net: &SignNetwork, k: u64, direction: Direction) -> Vec<SignId> {
    members(net, &core_mask(net, k, direction, CoreMode::Degree))
}

/// Nodes of the strength core of order `s`, sorted.
pub fn s_core(net: &SignNetwork, s: u64, direction: Direction) -> Vec<SignId> {
    members(net, &core_mask(net, s, direction, CoreMode::Strength))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreProfile {
    pub direction: Direction,
    pub mode: CoreMode,
    /// `(order, core size)` for orders `0..=innermost_order`.
    pub entries: Vec<(u64, usize)>,
    pub innermost_order: u64,
    pub innermost_set: Vec<SignId>,
}

/// Sizes of successive cores until the first empty one.
///
/// Order 0 is the whole node set, so a network without links has innermost
/// order 0.
pub fn core_profile(net: &SignNetwork, direction: Direction, mode: CoreMode) -> CoreProfile {
    let mut alive = vec![true; net.node_count()];
    let mut entries = vec![(0, net.node_count())];
    let mut innermost = alive.clone();
    let mut order = 0u64;
    loop {
        let next = order + 1;
        peel(net, &mut alive, next, direction, mode);
        let size = alive.iter().filter(|&&a| a).count();
        if size == 0 {
            break;
        }
        entries.push((next, size));
        innermost.copy_from_slice(&alive);
        order = next;
    }
    CoreProfile {
        direction,
        mode,
        entries,
        innermost_order: order,
        innermost_set: members(net, &innermost),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LexiconSets {
    pub mode: CoreMode,
    pub out_order: u64,
    pub in_order: u64,
    /// Innermost out-core intersected with innermost in-core.
    pub medial: Vec<SignId>,
    /// Innermost out-core minus the medial set.
    pub preceders: Vec<SignId>,
    /// Innermost in-core minus the medial set.
    pub followers: Vec<SignId>,
    /// Union of the three sets.
    pub lexicon: Vec<SignId>,
}

pub fn lexicon_sets(net: &SignNetwork, mode: CoreMode) -> LexiconSets {
    let out = core_profile(net, Direction::Out, mode);
    let inn = core_profile(net, Direction::In, mode);
    let medial: Vec<SignId> = out
        .innermost_set
        .iter()
        .filter(|s| inn.innermost_set.binary_search(s).is_ok())
        .cloned()
        .collect();
    let not_medial = |s: &&SignId| medial.binary_search(s).is_err();
    let preceders: Vec<SignId> = out
        .innermost_set
        .iter()
        .filter(not_medial)
        .cloned()
        .collect();
    let followers: Vec<SignId> = inn
        .innermost_set
        .iter()
        .filter(not_medial)
        .cloned()
        .collect();
    let mut lexicon: Vec<SignId> = medial
        .iter()
        .chain(&preceders)
        .chain(&followers)
        .cloned()
        .collect();
    lexicon.sort();
    LexiconSets {
        mode,
        out_order: out.innermost_order,
        in_order: inn.innermost_order,
        medial,
        preceders,
        followers,
        lexicon,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoreSizeStats {
    pub order: u64,
    pub empirical: usize,
    pub random_mean: f64,
    pub random_std: f64,
}

/// Core profile of the corpus next to its shuffle ensemble.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RandomizedCoreProfile {
    pub empirical: CoreProfile,
    pub sizes: Vec<CoreSizeStats>,
    /// Mean and std of the per-realization innermost orders.
    pub innermost_order_mean: f64,
    pub innermost_order_std: f64,
    /// Largest order whose ensemble-mean core size is at least one node.
    pub mean_profile_innermost_order: u64,
}

pub fn randomized_core_profile(
    corpus: &Corpus,
    direction: Direction,
    mode: CoreMode,
    plan: &ShufflePlan,
) -> Result<RandomizedCoreProfile> {
    let empirical = core_profile(&SignNetwork::build(corpus), direction, mode);
    let profiles: Vec<CoreProfile> = (0..plan.realizations)
        .into_par_iter()
        .map(|i| {
            core_profile(
                &SignNetwork::build(&plan.realize(corpus, i)),
                direction,
                mode,
            )
        })
        .collect();
    let max_order = profiles
        .iter()
        .map(|p| p.innermost_order)
        .chain([empirical.innermost_order])
        .max()
        .unwrap_or(0);
    let size_at = |p: &CoreProfile, order: u64| -> usize {
        p.entries
            .iter()
            .find(|&&(o, _)| o == order)
            .map_or(0, |&(_, s)| s)
    };
    let mut by_order = BTreeMap::new();
    for order in 0..=max_order {
        let values: Vec<f64> = profiles.iter().map(|p| size_at(p, order) as f64).collect();
        by_order.insert(order, (size_at(&empirical, order), mean_std(&values)?));
    }
    let sizes: Vec<CoreSizeStats> = by_order
        .into_iter()
        .map(|(order, (emp, (m, s)))| CoreSizeStats {
            order,
            empirical: emp,
            random_mean: m,
            random_std: s,
        })
        .collect();
    let orders: Vec<f64> = profiles.iter().map(|p| p.innermost_order as f64).collect();
    let (innermost_order_mean, innermost_order_std) = mean_std(&orders)?;
    let mean_profile_innermost_order = sizes
        .iter()
        .filter(|s| s.random_mean >= 1.0)
        .map(|s| s.order)
        .max()
        .unwrap_or(0);
    Ok(RandomizedCoreProfile {
        empirical,
        sizes,
        innermost_order_mean,
        innermost_order_std,
        mean_profile_innermost_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tests::{corpus, REF4};

    fn ids(v: &[&str]) -> Vec<SignId> {
        v.iter().map(|s| SignId::new(s).unwrap()).collect()
    }

    fn ref4() -> SignNetwork {
        SignNetwork::build(&Corpus::parse(REF4).unwrap())
    }

    fn cycle(weight: usize) -> SignNetwork {
        let mut lines = Vec::new();
        for _ in 0..weight {
            lines.extend(["A B", "B C", "C A"]);
        }
        SignNetwork::build(&corpus(&lines))
    }

    #[test]
    fn ref4_out_core_cascades_to_empty() {
        assert!(k_core(&ref4(), 1, Direction::Out).is_empty());
        assert!(s_core(&ref4(), 2, Direction::Out).is_empty());
    }

    #[test]
    fn cycle_survives() {
        for dir in [Direction::In, Direction::Out] {
            assert_eq!(k_core(&cycle(1), 1, dir), ids(&["A", "B", "C"]));
            assert_eq!(s_core(&cycle(5), 5, dir), ids(&["A", "B", "C"]));
            assert!(s_core(&cycle(5), 6, dir).is_empty());
        }
    }

    #[test]
    fn order_zero_keeps_everything() {
        assert_eq!(k_core(&ref4(), 0, Direction::In).len(), 4);
        assert_eq!(s_core(&ref4(), 0, Direction::Out).len(), 4);
    }

    #[test]
    fn loop_counts_for_its_node() {
        let net = SignNetwork::build(&corpus(&["A A", "B"]));
        assert_eq!(k_core(&net, 1, Direction::Out), ids(&["A"]));
        assert_eq!(k_core(&net, 1, Direction::In), ids(&["A"]));
        assert!(k_core(&net, 2, Direction::In).is_empty());
    }

    #[test]
    fn cycle_profile() {
        for dir in [Direction::In, Direction::Out] {
            let p = core_profile(&cycle(1), dir, CoreMode::Degree);
            assert_eq!(p.innermost_order, 1);
            assert_eq!(p.entries, vec![(0, 3), (1, 3)]);
            assert_eq!(p.innermost_set, ids(&["A", "B", "C"]));
        }
        let p = core_profile(&cycle(4), Direction::In, CoreMode::Strength);
        assert_eq!(p.innermost_order, 4);
    }

    #[test]
    fn linkless_profile_is_order_zero() {
        let net = SignNetwork::build(&corpus(&["A", "B"]));
        let p = core_profile(&net, Direction::Out, CoreMode::Degree);
        assert_eq!(p.innermost_order, 0);
        assert_eq!(p.innermost_set.len(), 2);
    }

    #[test]
    fn cycle_lexicon() {
        let lex = lexicon_sets(&cycle(1), CoreMode::Degree);
        assert_eq!(lex.medial, ids(&["A", "B", "C"]));
        assert!(lex.preceders.is_empty());
        assert!(lex.followers.is_empty());
        assert_eq!(lex.lexicon, lex.medial);
    }

    #[test]
    fn lexicon_splits_asymmetric_cores() {
        // A, B, C are fully linked; P only sends into them, F only receives.
        let net = SignNetwork::build(&corpus(&[
            "A B", "B A", "A C", "C A", "B C", "C B", "P A", "P B", "A F", "B F",
        ]));
        let lex = lexicon_sets(&net, CoreMode::Degree);
        assert_eq!(lex.out_order, 2);
        assert_eq!(lex.in_order, 2);
        assert_eq!(lex.medial, ids(&["A", "B", "C"]));
        assert_eq!(lex.preceders, ids(&["P"]));
        assert_eq!(lex.followers, ids(&["F"]));
        assert_eq!(lex.lexicon, ids(&["A", "B", "C", "F", "P"]));
    }

    #[test]
    fn randomized_profile_reports_both_orders() {
        let c = corpus(&["A B C D", "B C D A", "C D", "A C", "D B A"]);
        let plan = ShufflePlan::new(5, 20).unwrap();
        let r = randomized_core_profile(&c, Direction::Out, CoreMode::Degree, &plan).unwrap();
        assert_eq!(r.sizes[0].random_mean, 4.0);
        assert!(r.innermost_order_mean >= 1.0);
        assert!(r.mean_profile_innermost_order as f64 >= r.innermost_order_mean.floor() - 1.0);
    }

    #[test]
    fn parse_mode_and_direction() {
        assert_eq!("degree".parse::<CoreMode>().unwrap(), CoreMode::Degree);
        assert_eq!("in".parse::<Direction>().unwrap(), Direction::In);
        assert!("both".parse::<Direction>().is_err());
    }
}
