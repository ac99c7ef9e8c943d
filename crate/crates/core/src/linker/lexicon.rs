use std::collections::{BTreeMap, HashMap};

use super::{normalize_tokens, ConceptId, Weight};
use crate::language::LanguageTag;

/// Longest phrase, in tokens, that a lexicon entry may have.
pub const MAX_PHRASE_LEN: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate<W> {
    pub concept: ConceptId,
    pub prior: W,
}

/// Surface forms per language partition, each mapped to its candidate
/// concepts sorted by prior (descending) then id.
#[derive(Clone, Debug)]
pub struct Lexicon<W> {
    partitions: BTreeMap<LanguageTag, HashMap<String, Vec<Candidate<W>>>>,
    max_phrase_len: usize,
}

impl<W: Weight> Lexicon<W> {
    /// Builds from `(surface, language, concept, prior)` entries. Surfaces
    /// are normalized with [`normalize_tokens`] and re-joined by spaces.
    pub fn from_entries<I, S>(entries: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = (S, LanguageTag, ConceptId, W)>,
        S: AsRef<str>,
    {
        let mut partitions: BTreeMap<LanguageTag, HashMap<String, Vec<Candidate<W>>>> = BTreeMap::new();
        let mut max_phrase_len = 1;
        for (surface, lang, concept, prior) in entries {
            let surface = surface.as_ref();
            if lang.is_und() {
                return Err(LexiconError::Invalid(format!("entry {surface:?} has language und")));
            }
            if !(prior > W::zero() && prior <= W::one()) {
                return Err(LexiconError::Invalid(format!("entry {surface:?} has prior {prior} outside (0,1]")));
            }
            let tokens = normalize_tokens(surface, lang);
            if tokens.is_empty() || tokens.len() > MAX_PHRASE_LEN {
                return Err(LexiconError::Invalid(format!(
                    "entry {surface:?} has {} tokens, allowed 1..={MAX_PHRASE_LEN}",
                    tokens.len()
                )));
            }
            max_phrase_len = max_phrase_len.max(tokens.len());
            let list = partitions.entry(lang).or_default().entry(tokens.join(" ")).or_default();
            if list.iter().any(|c| c.concept == concept) {
                return Err(LexiconError::Invalid(format!("duplicate entry {surface:?} {lang} {concept}")));
            }
            list.push(Candidate { concept, prior });
        }
        let tolerance: W = super::weight(1e-9);
        for (lang, part) in partitions.iter_mut() {
            for (surface, list) in part.iter_mut() {
                let sum = list.iter().fold(W::zero(), |acc, c| acc + c.prior);
                if sum > W::one() + tolerance {
                    return Err(LexiconError::Invalid(format!("priors of {surface:?} ({lang}) sum to {sum}")));
                }
                sort_candidates(list);
            }
        }
        Ok(Lexicon { partitions, max_phrase_len })
    }

    /// Parses the TSV format `surface\tlang\tconcept_id\tprior`.
    pub fn parse_tsv(text: &str) -> Result<Self, LexiconError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let err = |message: String| LexiconError::Format { line: i + 1, message };
            let cols: Vec<&str> = line.split('\t').collect();
            let [surface, lang, concept, prior] = cols[..] else {
                return Err(err(format!("expected 4 columns, found {}", cols.len())));
            };
            let lang: LanguageTag = lang.parse().map_err(|e| err(format!("{e}")))?;
            let concept: ConceptId = concept.parse().map_err(|e| err(format!("{e}")))?;
            let prior: f64 = prior.parse().map_err(|_| err(format!("bad prior {prior:?}")))?;
            let prior = W::from_f64(prior).ok_or_else(|| err(format!("bad prior {prior}")))?;
            entries.push((surface.to_string(), lang, concept, prior));
        }
        Self::from_entries(entries)
    }

    pub fn max_phrase_len(&self) -> usize {
        self.max_phrase_len
    }

    pub fn lookup(&self, surface: &str, language: LanguageTag) -> Option<&[Candidate<W>]> {
        self.partitions.get(&language)?.get(surface).map(Vec::as_slice)
    }

    pub fn languages(&self) -> impl Iterator<Item = LanguageTag> + '_ {
        self.partitions.keys().copied()
    }

    /// Surfaces of one partition, sorted.
    pub fn surfaces(&self, language: LanguageTag) -> Vec<&str> {
        let mut v: Vec<&str> = self.partitions.get(&language).into_iter().flatten().map(|(s, _)| s.as_str()).collect();
        v.sort_unstable();
        v
    }

    /// Number of (surface, language) keys.
    pub fn surface_count(&self) -> usize {
        self.partitions.values().map(HashMap::len).sum()
    }

    /// Candidates for `surface`. For `Und`, candidates of every partition
    /// containing the surface are merged and priors are averaged over those
    /// partitions.
    pub fn candidates(&self, surface: &str, language: LanguageTag) -> Option<Vec<Candidate<W>>> {
        if !language.is_und() {
            return self.lookup(surface, language).map(<[_]>::to_vec);
        }
        let mut sums: BTreeMap<ConceptId, W> = BTreeMap::new();
        let mut hits = 0usize;
        for part in self.partitions.values() {
            if let Some(list) = part.get(surface) {
                hits += 1;
                for c in list {
                    let e = sums.entry(c.concept).or_insert_with(W::zero);
                    *e = *e + c.prior;
                }
            }
        }
        if hits == 0 {
            return None;
        }
        let n = W::from_usize(hits).expect("partition count fits weight type");
        let mut merged: Vec<Candidate<W>> =
            sums.into_iter().map(|(concept, s)| Candidate { concept, prior: s / n }).collect();
        sort_candidates(&mut merged);
        Some(merged)
    }
}

pub(crate) fn sort_candidates<W: Weight>(list: &mut [Candidate<W>]) {
    list.sort_by(|a, b| {
        b.prior
            .partial_cmp(&a.prior)
            .expect("priors are finite")
            .then(a.concept.cmp(&b.concept))
    });
}
