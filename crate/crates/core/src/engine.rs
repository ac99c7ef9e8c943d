//! Query pipeline shared by the HTTP API, the CLI and the dialogue manager:
//! language routing, linking, retrieval and response shaping.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::index::{ConceptIndex, ResultSet};
use crate::langid::{detect_language, LanguageProfile};
use crate::language::LanguageTag;
use crate::linker::{Annotation, ConceptId, Labels, LinkerBackend, LinkerError, Mention};

/// Hits returned by the stateless search endpoints.
pub const MAX_HITS: usize = 50;
/// Refinement suggestions per response.
pub const MAX_SUGGESTIONS: usize = 6;

/// How a query was linked.
#[derive(Clone, Debug, PartialEq)]
pub struct QueryAnalysis {
    pub detected: LanguageTag,
    pub confidence: f64,
    /// Lexicon partition whose annotation was kept.
    pub language: LanguageTag,
    pub concepts: BTreeSet<ConceptId>,
    pub mentions: Vec<(Mention<f64>, ConceptId)>,
    pub ambiguous: Vec<Mention<f64>>,
}

impl QueryAnalysis {
    pub fn has_mentions(&self) -> bool {
        !self.mentions.is_empty() || !self.ambiguous.is_empty()
    }

    /// True when the detected language was confident and its own partition
    /// produced the kept annotation.
    pub fn confidently_detected(&self) -> bool {
        !self.detected.is_und() && self.language == self.detected && self.has_mentions()
    }
}

fn covered_tokens(a: &Annotation<f64>) -> usize {
    let span = |m: &Mention<f64>| m.span.1 - m.span.0;
    a.mentions.iter().map(|(m, _)| span(m)).sum::<usize>() + a.ambiguous.iter().map(span).sum::<usize>()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptRef {
    pub id: ConceptId,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HitView {
    pub rank: usize,
    pub score: u32,
    pub title: String,
    pub portal: String,
    pub dataset_id: String,
    pub language: LanguageTag,
    pub landing_url: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuggestionView {
    pub id: ConceptId,
    pub label: String,
    pub doc_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityView {
    pub surface: String,
    pub senses: Vec<ConceptRef>,
}

/// Body of `/v1/search` and `/v1/refine` responses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResponse {
    pub query_concepts: Vec<ConceptRef>,
    pub total_hits: usize,
    pub hits: Vec<HitView>,
    pub suggestions: Vec<SuggestionView>,
    pub ambiguous: Vec<AmbiguityView>,
}

/// Read-only search state: index, language profiles, linker and labels.
pub struct SearchEngine {
    pub index: ConceptIndex,
    pub profiles: Vec<LanguageProfile>,
    pub labels: Labels,
    pub linker: Box<dyn LinkerBackend<f64>>,
}

impl SearchEngine {
    pub fn new(
        index: ConceptIndex,
        profiles: Vec<LanguageProfile>,
        labels: Labels,
        linker: Box<dyn LinkerBackend<f64>>,
    ) -> Self {
        SearchEngine { index, profiles, labels, linker }
    }

    /// Links a query. The partition is the explicit language if given,
    /// else the detected one, else `fallback` (a session preference), else
    /// `und`. When that partition covers fewer query tokens than the merged
    /// `und` partition, the `und` annotation is used instead.
    pub fn analyze(
        &self,
        text: &str,
        explicit: Option<LanguageTag>,
        fallback: Option<LanguageTag>,
    ) -> Result<QueryAnalysis, LinkerError> {
        let (detected, confidence) = detect_language(text, &self.profiles);
        let mut language = explicit
            .or((!detected.is_und()).then_some(detected))
            .or(fallback)
            .unwrap_or(LanguageTag::Und);
        let mut annotation = self.linker.link(text, language)?;
        if !language.is_und() {
            let total = crate::linker::normalize_tokens(text, language).len();
            let covered = covered_tokens(&annotation);
            if covered < total {
                let merged = self.linker.link(text, LanguageTag::Und)?;
                if covered_tokens(&merged) > covered {
                    annotation = merged;
                    language = LanguageTag::Und;
                }
            }
        }
        Ok(QueryAnalysis {
            detected,
            confidence,
            language,
            concepts: annotation.concepts,
            mentions: annotation.mentions,
            ambiguous: annotation.ambiguous,
        })
    }

    /// Search followed by refinement, recomputed from scratch.
    pub fn retrieve(&self, query: &BTreeSet<ConceptId>, filters: &BTreeSet<ConceptId>) -> ResultSet {
        let r = self.index.search_any(query);
        if filters.is_empty() {
            r
        } else {
            self.index.refine(&r, filters)
        }
    }

    pub fn label(&self, id: ConceptId, lang: LanguageTag) -> String {
        self.labels.label(id, display_language(lang))
    }

    pub fn concept_ref(&self, id: ConceptId, lang: LanguageTag) -> ConceptRef {
        ConceptRef { id, label: self.label(id, lang) }
    }

    pub fn hit_views(&self, result: &ResultSet, offset: usize, limit: usize) -> Vec<HitView> {
        result
            .hits
            .iter()
            .enumerate()
            .skip(offset)
            .take(limit)
            .map(|(i, h)| {
                let r = &self.index.dataset(h.ordinal).expect("hit ordinal in index").record;
                HitView {
                    rank: i + 1,
                    score: h.score,
                    title: r.title.clone(),
                    portal: r.portal_id.clone(),
                    dataset_id: r.dataset_id.clone(),
                    language: r.language,
                    landing_url: r.landing_url.clone(),
                }
            })
            .collect()
    }

    pub fn respond(&self, result: &ResultSet, ambiguous: &[Mention<f64>], lang: LanguageTag) -> SearchResponse {
        SearchResponse {
            query_concepts: result.query_concepts.iter().map(|c| self.concept_ref(*c, lang)).collect(),
            total_hits: result.hits.len(),
            hits: self.hit_views(result, 0, MAX_HITS),
            suggestions: self
                .index
                .top_cooccurring(result, MAX_SUGGESTIONS)
                .into_iter()
                .map(|(id, doc_count)| SuggestionView { id, label: self.label(id, lang), doc_count })
                .collect(),
            ambiguous: ambiguous
                .iter()
                .map(|m| AmbiguityView {
                    surface: m.surface.clone(),
                    senses: m.candidates.iter().map(|c| self.concept_ref(c.concept, lang)).collect(),
                })
                .collect(),
        }
    }

    /// Stateless free-text search. Ambiguous mentions are reported and
    /// contribute nothing to the query.
    pub fn search(&self, text: &str, lang: Option<LanguageTag>) -> Result<SearchResponse, LinkerError> {
        let a = self.analyze(text, lang, None)?;
        let result = self.index.search_any(&a.concepts);
        Ok(self.respond(&result, &a.ambiguous, a.language))
    }

    /// Stateless search over explicit concepts with filters applied.
    pub fn refine(&self, query: &BTreeSet<ConceptId>, filters: &BTreeSet<ConceptId>) -> SearchResponse {
        let result = self.index.refine(&self.index.search_any(query), filters);
        self.respond(&result, &[], LanguageTag::Und)
    }
}

/// Labels for `und` are shown in English.
pub fn display_language(lang: LanguageTag) -> LanguageTag {
    if lang.is_und() {
        LanguageTag::En
    } else {
        lang
    }
}
