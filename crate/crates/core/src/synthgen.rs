//! Synthetic corpora: independent-sign null corpora and flat phrase-grammar
//! corpora with known phrase boundaries.
//!
//! Grammar files are TOML:
//!
//! ```toml
//! [[class]]
//! name = "INITIAL"
//! phrases = ["I1 I2 I3", "J1 J2 J3"]
//! weights = [2.0, 1.0]        # optional, equal by default
//!
//! [[slot]]
//! class = "INITIAL"
//! probability = 1.0           # optional, 1.0 by default
//! ```
//!
//! Each sequence walks the slots in order and, with the slot's probability,
//! appends one phrase of that class drawn by weight.

use std::fmt::Write as _;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Sequence, SignId};
use crate::error::{Error, Result};

/// Distribution over signs.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencySpec {
    signs: Vec<SignId>,
    weights: Vec<f64>,
}

fn sign_names(count: usize) -> Vec<SignId> {
    let width = count.to_string().len().max(2);
    (1..=count)
        .map(|i| SignId::new(&format!("S{i:0width$}")).unwrap())
        .collect()
}

fn check_weights(weights: &[f64], what: &str) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "{what}: empty specification"
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "{what}: weight {w} is not positive"
        )));
    }
    Ok(())
}

impl FrequencySpec {
    pub fn from_weights(signs: Vec<SignId>, weights: Vec<f64>) -> Result<Self> {
        if signs.len() != weights.len() {
            return Err(Error::InvalidArgument(
                "frequency spec: signs and weights differ in length".into(),
            ));
        }
        check_weights(&weights, "frequency spec")?;
        Ok(FrequencySpec { signs, weights })
    }

    /// `count` equiprobable signs named `S01`, `S02`, ...
    pub fn uniform(count: usize) -> Result<Self> {
        Self::from_weights(sign_names(count), vec![1.0; count])
    }

    /// `count` signs whose expected frequencies follow a power law with mass
    /// exponent `gamma`: the sign of rank `r` gets weight `r^(-1 / (gamma - 1))`,
    /// the rank-frequency form of that law.
    pub fn power_law(count: usize, gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "power-law frequency spec needs gamma > 1, got {gamma}"
            )));
        }
        let exponent = 1.0 / (gamma - 1.0);
        let weights = (1..=count).map(|r| (r as f64).powf(-exponent)).collect();
        Self::from_weights(sign_names(count), weights)
    }

    pub fn signs(&self) -> &[SignId] {
        &self.signs
    }
}

/// Distribution over sequence lengths.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthSpec {
    lengths: Vec<usize>,
    weights: Vec<f64>,
}

impl LengthSpec {
    pub fn from_weights(lengths: Vec<usize>, weights: Vec<f64>) -> Result<Self> {
        if lengths.len() != weights.len() {
            return Err(Error::InvalidArgument(
                "length spec: lengths and weights differ in length".into(),
            ));
        }
        if lengths.contains(&0) {
            return Err(Error::InvalidArgument(
                "length spec: lengths must be at least 1".into(),
            ));
        }
        check_weights(&weights, "length spec")?;
        Ok(LengthSpec { lengths, weights })
    }

    pub fn fixed(length: usize) -> Result<Self> {
        Self::from_weights(vec![length], vec![1.0])
    }

    /// Every length in `min..=max` equally likely.
    pub fn uniform(min: usize, max: usize) -> Result<Self> {
        if min > max {
            return Err(Error::InvalidArgument(format!(
                "length range {min}..={max} is empty"
            )));
        }
        let lengths: Vec<usize> = (min..=max).collect();
        let weights = vec![1.0; lengths.len()];
        Self::from_weights(lengths, weights)
    }
}

/// Sequences of independently drawn signs.
pub fn generate_null_corpus(
    frequencies: &FrequencySpec,
    lengths: &LengthSpec,
    count: usize,
    seed: u64,
) -> Result<Corpus> {
    let sign_dist = WeightedIndex::new(&frequencies.weights)
        .map_err(|e| Error::InvalidArgument(format!("frequency spec: {e}")))?;
    let len_dist = WeightedIndex::new(&lengths.weights)
        .map_err(|e| Error::InvalidArgument(format!("length spec: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sequences = Vec::with_capacity(count);
    for _ in 0..count {
        let n = lengths.lengths[len_dist.sample(&mut rng)];
        let signs = (0..n)
            .map(|_| frequencies.signs[sign_dist.sample(&mut rng)].clone())
            .collect();
        sequences.push(Sequence::new(signs, None)?);
    }
    Ok(Corpus::from_sequences(sequences))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhraseClass {
    pub name: String,
    pub phrases: Vec<Vec<SignId>>,
    /// Normalised to sum to 1.
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TemplateSlot {
    /// Index into the grammar's classes.
    pub class: usize,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhraseGrammar {
    classes: Vec<PhraseClass>,
    template: Vec<TemplateSlot>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GrammarFile {
    class: Vec<ClassFile>,
    slot: Vec<SlotFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassFile {
    name: String,
    phrases: Vec<String>,
    weights: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SlotFile {
    class: String,
    probability: Option<f64>,
}

impl PhraseGrammar {
    /// Validates and normalises. `classes` holds `(name, phrases, weights)`;
    /// `template` holds `(class name, inclusion probability)`.
    pub fn new(
        classes: Vec<(String, Vec<Vec<SignId>>, Vec<f64>)>,
        template: Vec<(String, f64)>,
    ) -> Result<Self> {
        let mut out = Vec::with_capacity(classes.len());
        for (name, phrases, weights) in classes {
            if out.iter().any(|c: &PhraseClass| c.name == name) {
                return Err(Error::Grammar(format!("class {name:?} defined twice")));
            }
            if phrases.is_empty() {
                return Err(Error::Grammar(format!("class {name:?} has no phrases")));
            }
            if phrases.iter().any(Vec::is_empty) {
                return Err(Error::Grammar(format!(
                    "class {name:?} has an empty phrase"
                )));
            }
            if weights.len() != phrases.len() {
                return Err(Error::Grammar(format!(
                    "class {name:?}: {} phrases but {} weights",
                    phrases.len(),
                    weights.len()
                )));
            }
            check_weights(&weights, &format!("class {name:?}"))
                .map_err(|e| Error::Grammar(e.to_string()))?;
            let total: f64 = weights.iter().sum();
            out.push(PhraseClass {
                name,
                phrases,
                weights: weights.iter().map(|w| w / total).collect(),
            });
        }
        if template.is_empty() {
            return Err(Error::Grammar("template has no slots".into()));
        }
        let mut slots = Vec::with_capacity(template.len());
        for (class, probability) in template {
            let idx = out
                .iter()
                .position(|c| c.name == class)
                .ok_or_else(|| Error::Grammar(format!("slot refers to unknown class {class:?}")))?;
            if !(probability > 0.0 && probability <= 1.0) {
                return Err(Error::Grammar(format!(
                    "slot {class:?}: probability {probability} outside (0, 1]"
                )));
            }
            slots.push(TemplateSlot {
                class: idx,
                probability,
            });
        }
        if !slots.iter().any(|s| s.probability == 1.0) {
            return Err(Error::Grammar(
                "at least one slot needs probability 1 so no sequence comes out empty".into(),
            ));
        }
        Ok(PhraseGrammar {
            classes: out,
            template: slots,
        })
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let file: GrammarFile = toml::from_str(text).map_err(|e| Error::Grammar(e.to_string()))?;
        let mut classes = Vec::new();
        for c in file.class {
            let phrases = c
                .phrases
                .iter()
                .map(|p| {
                    Sequence::from_tokens(p)
                        .map(|s| s.signs().to_vec())
                        .map_err(|e| Error::Grammar(format!("class {:?}: {e}", c.name)))
                })
                .collect::<Result<Vec<_>>>()?;
            let weights = c.weights.unwrap_or_else(|| vec![1.0; phrases.len()]);
            classes.push((c.name, phrases, weights));
        }
        let template = file
            .slot
            .into_iter()
            .map(|s| (s.class, s.probability.unwrap_or(1.0)))
            .collect();
        Self::new(classes, template)
    }

    pub fn classes(&self) -> &[PhraseClass] {
        &self.classes
    }

    pub fn template(&self) -> &[TemplateSlot] {
        &self.template
    }
}

/// A phrase placed in a generated sequence; `start..=end` are positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhraseMark {
    pub class: String,
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrammarCorpus {
    pub corpus: Corpus,
    /// Ground-truth phrases, one list per sequence.
    pub truth: Vec<Vec<PhraseMark>>,
}

impl GrammarCorpus {
    /// Sidecar annotation: one line per sequence, `CLASS:start-end` entries
    /// separated by spaces.
    pub fn truth_to_text(&self) -> String {
        let mut out = String::new();
        for marks in &self.truth {
            for (i, m) in marks.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{}:{}-{}", m.class, m.start, m.end);
            }
            out.push('\n');
        }
        out
    }
}

pub fn generate_grammar_corpus(
    grammar: &PhraseGrammar,
    count: usize,
    seed: u64,
) -> Result<GrammarCorpus> {
    let pickers = grammar
        .classes
        .iter()
        .map(|c| WeightedIndex::new(&c.weights).map_err(|e| Error::Grammar(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sequences = Vec::with_capacity(count);
    let mut truth = Vec::with_capacity(count);
    for _ in 0..count {
        let mut signs: Vec<SignId> = Vec::new();
        let mut marks = Vec::new();
        for slot in &grammar.template {
            // Always draw, so a slot's inclusion never shifts later draws.
            let include = rand::Rng::random::<f64>(&mut rng) < slot.probability;
            let class = &grammar.classes[slot.class];
            let phrase = &class.phrases[pickers[slot.class].sample(&mut rng)];
            if include {
                marks.push(PhraseMark {
                    class: class.name.clone(),
                    start: signs.len(),
                    end: signs.len() + phrase.len() - 1,
                });
                signs.extend(phrase.iter().cloned());
            }
        }
        sequences.push(Sequence::new(signs, None)?);
        truth.push(marks);
    }
    Ok(GrammarCorpus {
        corpus: Corpus::from_sequences(sequences),
        truth,
    })
}
