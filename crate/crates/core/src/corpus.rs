//! Sign-sequence corpora.
//!
//! File format: UTF-8, one inscription per line, tokens separated by single
//! spaces, optional `label<TAB>` prefix. Lines starting with `#` and blank
//! lines are ignored. Tokens are stored in reading order exactly as they
//! appear left to right; nothing downstream ever reverses a sequence.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque sign identifier. Any non-empty token without whitespace.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SignId(Arc<str>);

impl SignId {
    pub fn new(token: &str) -> Result<Self> {
        if token.is_empty() {
            return Err(Error::InvalidArgument("empty sign id".into()));
        }
        if token.chars().any(char::is_whitespace) {
            return Err(Error::InvalidArgument(format!(
                "sign id {token:?} contains whitespace"
            )));
        }
        Ok(SignId(Arc::from(token)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SignId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for SignId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SignId::new(s)
    }
}

impl TryFrom<String> for SignId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        SignId::new(&s)
    }
}

impl From<SignId> for String {
    fn from(id: SignId) -> String {
        id.0.to_string()
    }
}

/// One inscription in reading order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    signs: Vec<SignId>,
    source: Option<String>,
}

impl Sequence {
    pub fn new(signs: Vec<SignId>, source: Option<String>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::InvalidArgument(
                "sequence must hold at least one sign".into(),
            ));
        }
        Ok(Sequence { signs, source })
    }

    /// Builds a sequence from a space-separated token string.
    pub fn from_tokens(text: &str) -> Result<Self> {
        let signs = text
            .split(' ')
            .map(SignId::new)
            .collect::<Result<Vec<_>>>()?;
        Sequence::new(signs, None)
    }

    pub fn signs(&self) -> &[SignId] {
        &self.signs
    }

    pub fn source(&self) -> Option<&str> {
        self.source.as_deref()
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.signs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(s.as_str())?;
        }
        Ok(())
    }
}

/// A sequence dropped by [`Corpus::dedup`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DroppedDuplicate {
    /// Line of the dropped copy (0 when the sequence was not parsed from text).
    pub line: usize,
    /// Line of the surviving first occurrence.
    pub first_line: usize,
}

/// An immutable collection of sequences plus the derived sign inventory.
///
/// Signs are interned: `inventory()` is sorted ascending and `codes()` holds
/// every sequence as indices into it, so index order equals `SignId` order.
#[derive(Clone, Debug)]
pub struct Corpus {
    sequences: Vec<Sequence>,
    lines: Vec<usize>,
    inventory: Vec<SignId>,
    frequencies: Vec<u64>,
    codes: Vec<Vec<u32>>,
    dropped: Vec<DroppedDuplicate>,
}

impl PartialEq for Corpus {
    fn eq(&self, other: &Self) -> bool {
        self.sequences == other.sequences && self.inventory == other.inventory
    }
}

impl Eq for Corpus {}

impl Corpus {
    pub fn from_sequences(sequences: Vec<Sequence>) -> Self {
        let lines = vec![0; sequences.len()];
        Self::build(sequences, lines)
    }

    fn build(sequences: Vec<Sequence>, lines: Vec<usize>) -> Self {
        let mut inventory: Vec<SignId> = sequences
            .iter()
            .flat_map(|s| s.signs.iter().cloned())
            .collect();
        inventory.sort();
        inventory.dedup();
        let index: HashMap<&SignId, u32> = inventory
            .iter()
            .enumerate()
            .map(|(i, s)| (s, i as u32))
            .collect();
        let mut frequencies = vec![0u64; inventory.len()];
        let codes: Vec<Vec<u32>> = sequences
            .iter()
            .map(|seq| {
                seq.signs
                    .iter()
                    .map(|s| {
                        let c = index[s];
                        frequencies[c as usize] += 1;
                        c
                    })
                    .collect()
            })
            .collect();
        Corpus {
            sequences,
            lines,
            inventory,
            frequencies,
            codes,
            dropped: Vec::new(),
        }
    }

    /// Same inventory, new sign arrangement. Every code must index the
    /// current inventory; frequencies are recounted.
    pub(crate) fn with_codes(&self, codes: Vec<Vec<u32>>) -> Corpus {
        let mut frequencies = vec![0u64; self.inventory.len()];
        let sequences = codes
            .iter()
            .zip(&self.sequences)
            .map(|(code, old)| {
                let signs = code
                    .iter()
                    .map(|&c| {
                        frequencies[c as usize] += 1;
                        self.inventory[c as usize].clone()
                    })
                    .collect();
                Sequence {
                    signs,
                    source: old.source.clone(),
                }
            })
            .collect();
        Corpus {
            sequences,
            lines: self.lines.clone(),
            inventory: self.inventory.clone(),
            frequencies,
            codes,
            dropped: Vec::new(),
        }
    }

    /// Parses the corpus file format. Sequences are kept in file order and
    /// are not deduplicated.
    pub fn parse(text: &str) -> Result<Self> {
        let mut sequences = Vec::new();
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let (source, body) = match line.matches('\t').count() {
                0 => (None, line),
                1 => {
                    let (label, body) = line.split_once('\t').unwrap();
                    if label.is_empty() {
                        return Err(err("empty source label before tab".into()));
                    }
                    (Some(label.to_string()), body)
                }
                n => return Err(err(format!("expected at most one tab, found {n}"))),
            };
            if body.is_empty() {
                return Err(err("no signs on line".into()));
            }
            let mut signs = Vec::new();
            for (t, token) in body.split(' ').enumerate() {
                if token.is_empty() {
                    return Err(err(format!("empty token at position {}", t + 1)));
                }
                signs.push(SignId::new(token).map_err(|e| err(e.to_string()))?);
            }
            sequences.push(Sequence { signs, source });
            lines.push(line_no);
        }
        Ok(Self::build(sequences, lines))
    }

    /// Writes the corpus back in file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for seq in &self.sequences {
            if let Some(src) = &seq.source {
                out.push_str(src);
                out.push('\t');
            }
            out.push_str(&seq.to_string());
            out.push('\n');
        }
        out
    }

    /// Keeps the first occurrence of each distinct sign list.
    pub fn dedup(&self) -> Corpus {
        let mut first_seen: HashMap<&[u32], usize> = HashMap::new();
        let mut keep = Vec::new();
        let mut dropped = self.dropped.clone();
        for (i, code) in self.codes.iter().enumerate() {
            match first_seen.get(code.as_slice()) {
                Some(&first) => dropped.push(DroppedDuplicate {
                    line: self.lines[i],
                    first_line: self.lines[first],
                }),
                None => {
                    first_seen.insert(code, i);
                    keep.push(i);
                }
            }
        }
        let sequences = keep.iter().map(|&i| self.sequences[i].clone()).collect();
        let lines = keep.iter().map(|&i| self.lines[i]).collect();
        let mut out = Self::build(sequences, lines);
        out.dropped = dropped;
        out
    }

    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    /// Source line of each sequence (0 for sequences not parsed from text).
    pub fn lines(&self) -> &[usize] {
        &self.lines
    }

    /// Duplicates removed by `dedup`, in encounter order.
    pub fn dropped_duplicates(&self) -> &[DroppedDuplicate] {
        &self.dropped
    }

    /// Sorted sign inventory.
    pub fn inventory(&self) -> &[SignId] {
        &self.inventory
    }

    /// Sequences as indices into `inventory()`.
    pub fn codes(&self) -> &[Vec<u32>] {
        &self.codes
    }

    pub fn index_of(&self, sign: &SignId) -> Option<u32> {
        self.inventory.binary_search(sign).ok().map(|i| i as u32)
    }

    /// Occurrence count per inventory entry.
    pub fn frequency_counts(&self) -> &[u64] {
        &self.frequencies
    }

    pub fn frequency(&self, sign: &SignId) -> u64 {
        self.index_of(sign)
            .map_or(0, |i| self.frequencies[i as usize])
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn total_sign_occurrences(&self) -> u64 {
        self.frequencies.iter().sum()
    }

    /// Number of adjacent sign pairs, `sum(n - 1)` over sequences.
    pub fn total_bigrams(&self) -> u64 {
        self.codes.iter().map(|c| c.len() as u64 - 1).sum()
    }

    pub fn length_distribution(&self) -> Result<LengthDistribution> {
        if self.is_empty() {
            return Err(Error::InvalidArgument("empty corpus".into()));
        }
        let mut lengths: Vec<usize> = self.codes.iter().map(Vec::len).collect();
        lengths.sort_unstable();
        let mut counts = BTreeMap::new();
        for &n in &lengths {
            *counts.entry(n).or_insert(0usize) += 1;
        }
        let m = lengths.len();
        let median = if m % 2 == 1 {
            lengths[m / 2] as f64
        } else {
            (lengths[m / 2 - 1] + lengths[m / 2]) as f64 / 2.0
        };
        Ok(LengthDistribution { counts, median })
    }

    /// Signs with their counts, by descending count then ascending id.
    pub fn sign_frequencies(&self) -> Vec<(SignId, u64)> {
        self.ranked_codes()
            .into_iter()
            .map(|c| {
                (
                    self.inventory[c as usize].clone(),
                    self.frequencies[c as usize],
                )
            })
            .collect()
    }

    /// Inventory indices in `sign_frequencies` order.
    pub fn ranked_codes(&self) -> Vec<u32> {
        let mut order: Vec<u32> = (0..self.inventory.len() as u32).collect();
        order.sort_by(|&a, &b| {
            self.frequencies[b as usize]
                .cmp(&self.frequencies[a as usize])
                .then(a.cmp(&b))
        });
        order
    }

    pub fn summary(&self) -> Result<CorpusSummary> {
        let lengths = self.length_distribution()?;
        Ok(CorpusSummary {
            sequences: self.len(),
            inventory_size: self.inventory.len(),
            total_sign_occurrences: self.total_sign_occurrences(),
            total_bigrams: self.total_bigrams(),
            min_length: *lengths.counts.keys().next().unwrap(),
            max_length: *lengths.counts.keys().next_back().unwrap(),
            median_length: lengths.median,
            duplicates_removed: self.dropped.len(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LengthDistribution {
    /// Sequence length to number of sequences.
    pub counts: BTreeMap<usize, usize>,
    pub median: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusSummary {
    pub sequences: usize,
    pub inventory_size: usize,
    pub total_sign_occurrences: u64,
    pub total_bigrams: u64,
    pub min_length: usize,
    pub max_length: usize,
    pub median_length: f64,
    pub duplicates_removed: usize,
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) const REF4: &str = "A B C\nA B\nB C\nD\n";

    pub(crate) fn corpus(lines: &[&str]) -> Corpus {
        Corpus::parse(&lines.join("\n")).unwrap()
    }

    fn id(s: &str) -> SignId {
        SignId::new(s).unwrap()
    }

    #[test]
    fn parses_two_lines() {
        let c = Corpus::parse("A B C\nD").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.inventory(), &[id("A"), id("B"), id("C"), id("D")]);
    }

    #[test]
    fn skips_comments_and_blanks() {
        let c = Corpus::parse("# note\n\nA A").unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.sequences()[0].len(), 2);
        assert_eq!(c.frequency(&id("A")), 2);
        assert_eq!(c.lines(), &[3]);
    }

    #[test]
    fn thirteen_sign_line() {
        let c =
            Corpus::parse("H99-4064\t520 919 140 360 235 002 861 033 705 231 740 877 032").unwrap();
        assert_eq!(c.sequences()[0].len(), 13);
        assert_eq!(c.sequences()[0].source(), Some("H99-4064"));
    }

    #[test]
    fn rejects_double_space() {
        let err = Corpus::parse("A B\nA  B").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                message: "empty token at position 2".into()
            }
        );
    }

    #[test]
    fn rejects_two_tabs() {
        let err = Corpus::parse("x\ty\tA").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn rejects_label_without_signs() {
        assert!(matches!(
            Corpus::parse("lbl\t").unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
        assert!(Corpus::parse("A \nB").is_err());
    }

    #[test]
    fn crlf_is_accepted() {
        let c = Corpus::parse("A B\r\nC\r\n").unwrap();
        assert_eq!(c.sequences()[1].signs(), &[id("C")]);
    }

    #[test]
    fn dedup_keeps_first_occurrence() {
        let c = Corpus::parse("A B\nA B\nC").unwrap().dedup();
        assert_eq!(c.to_text(), "A B\nC\n");
        assert_eq!(
            c.dropped_duplicates(),
            &[DroppedDuplicate {
                line: 2,
                first_line: 1
            }]
        );
    }

    #[test]
    fn dedup_respects_order() {
        let c = Corpus::parse("A B\nB A").unwrap().dedup();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn dedup_recomputes_frequencies() {
        let c = Corpus::parse("A B\nA B\nA").unwrap().dedup();
        assert_eq!(c.frequency(&id("A")), 2);
        assert_eq!(c.total_sign_occurrences(), 3);
    }

    #[test]
    fn ref4_length_histogram() {
        let d = Corpus::parse(REF4).unwrap().length_distribution().unwrap();
        assert_eq!(d.counts, BTreeMap::from([(1, 1), (2, 2), (3, 1)]));
        assert_eq!(d.median, 2.0);
    }

    #[test]
    fn single_sign_histogram() {
        let d = Corpus::parse("A").unwrap().length_distribution().unwrap();
        assert_eq!(d.counts, BTreeMap::from([(1, 1)]));
        assert_eq!(d.median, 1.0);
    }

    #[test]
    fn empty_corpus_has_no_length_distribution() {
        assert!(Corpus::parse("# nothing\n")
            .unwrap()
            .length_distribution()
            .is_err());
    }

    #[test]
    fn frequencies_sorted_then_tie_broken_by_id() {
        let c = Corpus::parse("A B\nA").unwrap();
        assert_eq!(c.sign_frequencies(), vec![(id("A"), 2), (id("B"), 1)]);
        let c = Corpus::parse("B\nA").unwrap();
        assert_eq!(c.sign_frequencies(), vec![(id("A"), 1), (id("B"), 1)]);
    }

    #[test]
    fn ref4_summary() {
        let s = Corpus::parse(REF4).unwrap().summary().unwrap();
        assert_eq!(s.sequences, 4);
        assert_eq!(s.inventory_size, 4);
        assert_eq!(s.total_sign_occurrences, 8);
        assert_eq!(s.total_bigrams, 4);
    }

    #[test]
    fn sign_id_rejects_whitespace() {
        assert!(SignId::new("a b").is_err());
        assert!(SignId::new("").is_err());
        assert!(SignId::new("017").is_ok());
    }
}
