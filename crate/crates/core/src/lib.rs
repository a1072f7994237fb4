//! Network analysis of sign-sequence corpora.
//!
//! The pipeline starts from a line-oriented corpus ([`corpus`]), builds the
//! directed adjacency network of signs ([`network`]), and compares it against
//! a per-sequence shuffle null model ([`ensemble`]). On top of that sit core
//! decompositions ([`cores`]), pair significance scores ([`significance`]),
//! segmentation trees ([`segment`]), power-law fits of sign frequencies
//! ([`powerfit`]) and synthetic corpus generators ([`synthgen`]).

pub mod cores;
pub mod corpus;
pub mod ensemble;
pub mod error;
pub mod network;
pub mod powerfit;
pub mod segment;
pub mod significance;
pub mod synthgen;

pub use cores::{CoreMode, CoreProfile, LexiconSets};
pub use corpus::{Corpus, LengthDistribution, Sequence, SignId};
pub use ensemble::{PositionalClasses, ShufflePlan};
pub use error::{Error, Result};
pub use network::{Direction, SignNetwork};
pub use powerfit::PowerLawFit;
pub use segment::SegmentationTree;
pub use significance::{ZRow, ZScoreTable};
pub use synthgen::PhraseGrammar;
