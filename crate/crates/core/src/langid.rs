//! Rank-profile language identification over character 1–4-grams with the
//! out-of-place distance.

use std::collections::HashMap;
use std::fmt::Write as _;

use unicode_normalization::UnicodeNormalization;

use crate::language::LanguageTag;

pub const PROFILE_SIZE: usize = 300;
pub const MAX_NGRAM: usize = 4;
pub const MIN_TRAINING_CHARS: usize = 500;
pub const MIN_QUERY_NGRAMS: usize = 3;
pub const MARGIN: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LangIdError {
    #[error("training text has {0} characters, at least {MIN_TRAINING_CHARS} required")]
    InsufficientText(usize),
    #[error("invalid profile file: {0}")]
    InvalidProfile(String),
}

#[derive(Clone, Debug)]
pub struct LanguageProfile {
    language: LanguageTag,
    ngrams: Vec<String>,
    ranks: HashMap<String, usize>,
}

impl PartialEq for LanguageProfile {
    fn eq(&self, other: &Self) -> bool {
        self.language == other.language && self.ngrams == other.ngrams
    }
}

impl Eq for LanguageProfile {}

impl LanguageProfile {
    fn from_ranked(language: LanguageTag, ngrams: Vec<String>) -> Self {
        let ranks = ngrams.iter().enumerate().map(|(r, g)| (g.clone(), r)).collect();
        LanguageProfile { language, ngrams, ranks }
    }

    pub fn language(&self) -> LanguageTag {
        self.language
    }

    /// N-grams by rank; the index is the rank.
    pub fn ngrams(&self) -> &[String] {
        &self.ngrams
    }

    pub fn rank(&self, ngram: &str) -> Option<usize> {
        self.ranks.get(ngram).copied()
    }

    /// Serializes to the profile file format (`LANG <code>` then
    /// `<rank>\t<ngram>` lines).
    pub fn to_file_string(&self) -> String {
        let mut s = format!("LANG {}\n", self.language.code());
        for (r, g) in self.ngrams.iter().enumerate() {
            let _ = writeln!(s, "{r}\t{g}");
        }
        s
    }

    pub fn parse_file(text: &str) -> Result<Self, LangIdError> {
        let bad = |m: String| LangIdError::InvalidProfile(m);
        let mut lines = text.split('\n');
        let header = lines.next().unwrap_or_default();
        let code = header.strip_prefix("LANG ").ok_or_else(|| bad(format!("bad header {header:?}")))?;
        let language: LanguageTag = code.parse().map_err(|e| bad(format!("{e}")))?;
        if language.is_und() {
            return Err(bad("profile for und".into()));
        }
        let mut ngrams = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let (rank, gram) = line.split_once('\t').ok_or_else(|| bad(format!("bad line {line:?}")))?;
            let rank: usize = rank.parse().map_err(|_| bad(format!("bad rank {rank:?}")))?;
            if rank != ngrams.len() {
                return Err(bad(format!("rank {rank} out of sequence")));
            }
            let n = gram.chars().count();
            if n == 0 || n > MAX_NGRAM {
                return Err(bad(format!("n-gram {gram:?} has length {n}")));
            }
            ngrams.push(gram.to_string());
        }
        if ngrams.len() > PROFILE_SIZE {
            return Err(bad(format!("{} n-grams exceed {PROFILE_SIZE}", ngrams.len())));
        }
        let profile = LanguageProfile::from_ranked(language, ngrams);
        if profile.ranks.len() != profile.ngrams.len() {
            return Err(bad("duplicate n-gram".into()));
        }
        Ok(profile)
    }
}

/// Top n-grams of `text` by (count desc, n-gram asc).
pub fn ranked_ngrams(text: &str) -> Vec<String> {
    let cleaned: String = text
        .nfc()
        .flat_map(char::to_lowercase)
        .map(|c| if c.is_alphabetic() { c } else { ' ' })
        .collect();
    let mut counts: HashMap<String, u32> = HashMap::new();
    let mut padded: Vec<char> = Vec::new();
    for tok in cleaned.split_whitespace() {
        padded.clear();
        padded.push(' ');
        padded.extend(tok.chars());
        padded.push(' ');
        for n in 1..=MAX_NGRAM {
            for w in padded.windows(n) {
                *counts.entry(w.iter().collect()).or_insert(0) += 1;
            }
        }
    }
    let mut ranked: Vec<(String, u32)> = counts.into_iter().collect();
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(PROFILE_SIZE);
    ranked.into_iter().map(|(g, _)| g).collect()
}

pub fn build_profile(training_text: &str, language: LanguageTag) -> Result<LanguageProfile, LangIdError> {
    let n = training_text.chars().count();
    if n < MIN_TRAINING_CHARS {
        return Err(LangIdError::InsufficientText(n));
    }
    Ok(LanguageProfile::from_ranked(language, ranked_ngrams(training_text)))
}

/// Returns the closest language and `1 - d_best / d_max`, or `(Und, 0.0)`
/// when the text has too few n-grams or the runner-up is within the margin.
/// Distance ties go to the smaller language code.
pub fn detect_language(text: &str, profiles: &[LanguageProfile]) -> (LanguageTag, f64) {
    let query = ranked_ngrams(text);
    if query.len() < MIN_QUERY_NGRAMS || profiles.is_empty() {
        return (LanguageTag::Und, 0.0);
    }
    let d_max = PROFILE_SIZE * query.len();
    let mut dists: Vec<(usize, LanguageTag)> = profiles
        .iter()
        .map(|p| {
            let d = query
                .iter()
                .enumerate()
                .map(|(r, g)| p.rank(g).map_or(PROFILE_SIZE, |s| r.abs_diff(s)))
                .sum();
            (d, p.language)
        })
        .collect();
    dists.sort_unstable();
    let (best_d, best) = dists[0];
    let second_d = dists.get(1).map_or(d_max, |x| x.0);
    if (second_d - best_d) as f64 / (d_max as f64) < MARGIN {
        return (LanguageTag::Und, 0.0);
    }
    (best, (1.0 - best_d as f64 / d_max as f64).clamp(0.0, 1.0))
}
