//! Concept linking over a local multilingual lexicon and concept graph.

mod backend;
mod disambiguate;
mod graph;
mod labels;
mod lexicon;
mod mentions;

use std::fmt;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use unicode_normalization::UnicodeNormalization;

pub use backend::{ExternalLinker, LinkerBackend, LinkerError, LocalLinker};
pub use disambiguate::{disambiguate, Annotation, AMBIGUITY_RATIO, DEGREE_WEIGHT, PRIOR_WEIGHT};
pub use graph::ConceptGraph;
pub use labels::Labels;
pub use lexicon::{Candidate, Lexicon, LexiconError, MAX_PHRASE_LEN};
pub use mentions::{find_mentions, Mention};

/// Scalar type for priors, edge weights and scores.
pub trait Weight: Float + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static {}

impl<T> Weight for T where T: Float + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static {}

pub(crate) fn weight<W: Weight>(x: f64) -> W {
    W::from_f64(x).expect("constant representable in weight type")
}

/// Language-independent sense identifier, written `c:` plus eight digits.
/// Numeric order equals the order of the written form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConceptId(u32);

impl ConceptId {
    pub const MAX: u32 = 99_999_999;

    pub fn new(n: u32) -> Option<Self> {
        (n <= Self::MAX).then_some(ConceptId(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c:{:08}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid concept id {0:?}")]
pub struct InvalidConceptId(pub String);

impl FromStr for ConceptId {
    type Err = InvalidConceptId;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s.strip_prefix("c:").filter(|d| d.len() == 8 && d.bytes().all(|b| b.is_ascii_digit()));
        match digits {
            Some(d) => Ok(ConceptId(d.parse().expect("eight ascii digits"))),
            None => Err(InvalidConceptId(s.to_string())),
        }
    }
}

impl Serialize for ConceptId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ConceptId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// NFC, lowercase, split on every character that is neither a letter nor a
/// digit. The language argument is accepted for symmetry with the lexicon
/// partitions; tokenization is the same for all supported languages.
pub fn normalize_tokens(text: &str, _language: crate::LanguageTag) -> Vec<String> {
    let lowered: String = text.nfc().flat_map(char::to_lowercase).collect();
    lowered
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}
