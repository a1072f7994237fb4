//! Fixtures shared by the criterion benchmarks.

use glyphnet_core::synthgen::{generate_null_corpus, FrequencySpec, LengthSpec};
use glyphnet_core::Corpus;

/// A null corpus roughly the size of a real inscription collection.
pub fn null_corpus(signs: usize, sequences: usize, seed: u64) -> Corpus {
    let freq = FrequencySpec::power_law(signs, 1.66).expect("valid spec");
    let lengths = LengthSpec::uniform(1, 9).expect("valid spec");
    generate_null_corpus(&freq, &lengths, sequences, seed).expect("valid corpus")
}
