mod common;

use glyphnet_core::significance::{
    pair_zscores, pair_zscores_with, significant_network, zscore_cdf, ZScoreTable,
};
use glyphnet_core::ShufflePlan;
use proptest::prelude::*;

use common::{corpus, enumerate_pair_moments, observed_pairs, sid};

#[test]
fn two_sign_sequence_matches_enumeration() {
    let exact = enumerate_pair_moments(&["A B"]);
    let ab = exact[&("A".to_string(), "B".to_string())];
    assert_eq!(ab.mean, 0.5);
    assert_eq!(ab.var, 0.25);
    let table = pair_zscores(&corpus(&["A B"]), &ShufflePlan::new(5, 20_000).unwrap()).unwrap();
    let row = table.get(&sid("A"), &sid("B")).unwrap();
    assert!((row.mean - 0.5).abs() < 0.02);
    assert!((row.std - 0.5).abs() < 0.01);
    assert!((row.z - 1.0).abs() < 0.08, "z = {}", row.z);
}

#[test]
fn avoided_pair_scores_negative() {
    // B A never occurs although every shuffle of "A B C" can produce it.
    let lines = ["A B C", "A B", "C A"];
    let exact = enumerate_pair_moments(&lines);
    assert!(exact[&("B".to_string(), "A".to_string())].mean > 0.0);
    let table =
        pair_zscores_with(&corpus(&lines), &ShufflePlan::new(1, 2000).unwrap(), true).unwrap();
    let row = table.get(&sid("B"), &sid("A")).unwrap();
    assert_eq!(row.count, 0);
    assert!(row.z < 0.0);
}

#[test]
fn constant_null_gets_zero_or_flag() {
    // A self-pair in "A A" is produced by every shuffle.
    let t = pair_zscores(&corpus(&["A A", "B C"]), &ShufflePlan::new(1, 50).unwrap()).unwrap();
    let aa = t.get(&sid("A"), &sid("A")).unwrap();
    assert_eq!((aa.std, aa.z, aa.flag()), (0.0, 0.0, ""));
    // With the absent reversal included, a two-outcome pair is never constant.
    let t = pair_zscores_with(
        &corpus(&["A A", "B C"]),
        &ShufflePlan::new(1, 50).unwrap(),
        true,
    )
    .unwrap();
    assert_eq!(t.rows().len(), 3);
}

#[test]
fn zscore_cdf_fractions() {
    let table = ZScoreTable::from_scores([
        (sid("A"), sid("B"), 1.0),
        (sid("B"), sid("C"), 2.0),
        (sid("C"), sid("D"), 3.0),
        (sid("D"), sid("E"), f64::INFINITY),
    ]);
    let cdf = zscore_cdf(&table);
    assert_eq!(cdf.positive_infinite, 1);
    let at2 = cdf.points.iter().find(|p| p.0 == 2.0).unwrap().1;
    assert!((at2 - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn thresholds_on_a_real_table() {
    let t = pair_zscores(
        &corpus(&["A B C", "A B", "B C", "D"]),
        &ShufflePlan::new(3, 300).unwrap(),
    )
    .unwrap();
    let all = significant_network(&t, -100.0).unwrap();
    assert_eq!(all.network.edge_count(), 2);
    assert_eq!(all.components.len(), 1);
    assert_eq!(
        significant_network(&t, 100.0).unwrap().network.edge_count(),
        0
    );
    assert!(significant_network(&t, f64::NAN).is_err());
    assert!(significant_network(&t, f64::INFINITY).is_err());
}

#[test]
fn table_is_deterministic_and_thread_independent() {
    let c = corpus(&["A B C D", "B C A", "C C D A B", "D A"]);
    let plan = ShufflePlan::new(77, 500).unwrap();
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = one.install(|| pair_zscores_with(&c, &plan, true).unwrap());
    let b = four.install(|| pair_zscores_with(&c, &plan, true).unwrap());
    assert_eq!(a, b);
    assert_eq!(a.master_seed, 77);
    assert_eq!(a.realizations, 500);
}

#[test]
fn empty_bigram_corpus_is_an_error() {
    assert!(pair_zscores(&corpus(&["A", "B"]), &ShufflePlan::new(1, 10).unwrap()).is_err());
    assert!(pair_zscores(&corpus(&["A B"]), &ShufflePlan::new(1, 1).unwrap()).is_err());
}

fn small_corpus() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(
        prop::collection::vec(prop::sample::select(vec!["A", "B", "C", "D"]), 1..=5)
            .prop_map(|v| v.join(" ")),
        1..=5,
    )
    .prop_filter("needs a bigram", |lines| {
        lines.iter().any(|l| l.contains(' '))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rows_cover_exactly_the_expected_pairs(lines in small_corpus()) {
        let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
        let c = corpus(&refs);
        let plan = ShufflePlan::new(3, 20).unwrap();
        let observed = observed_pairs(&refs);
        let possible = enumerate_pair_moments(&refs);

        let table = pair_zscores(&c, &plan).unwrap();
        prop_assert_eq!(table.rows().len(), observed.len());
        let full = pair_zscores_with(&c, &plan, true).unwrap();
        prop_assert_eq!(full.rows().len(), possible.len());
        for row in full.rows() {
            let key = (row.from.to_string(), row.to.to_string());
            prop_assert!(possible.contains_key(&key));
            prop_assert_eq!(row.count, observed.get(&key).copied().unwrap_or(0));
            prop_assert!((row.p_emp - row.count as f64 / full.total_bigrams as f64).abs() < 1e-15);
            if row.std > 0.0 {
                prop_assert!(row.z.is_finite());
            }
        }
    }

    #[test]
    fn significant_edges_shrink_with_threshold(lines in small_corpus(), lo in -2.0f64..2.0, step in 0.0f64..3.0) {
        let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
        let table = pair_zscores_with(&corpus(&refs), &ShufflePlan::new(9, 30).unwrap(), true).unwrap();
        let loose = significant_network(&table, lo).unwrap().network;
        let strict = significant_network(&table, lo + step).unwrap().network;
        for &(a, b) in strict.edges().keys() {
            let (a, b) = (&strict.nodes()[a as usize], &strict.nodes()[b as usize]);
            prop_assert!(loose.index_of(a).is_some() && loose.index_of(b).is_some());
            let (ia, ib) = (loose.index_of(a).unwrap(), loose.index_of(b).unwrap());
            prop_assert!(loose.weight(ia, ib) > 0);
            // only observed pairs can be significant
            prop_assert!(table.get(a, b).unwrap().count > 0);
        }
    }
}
