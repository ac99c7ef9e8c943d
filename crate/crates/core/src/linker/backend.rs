use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{
    disambiguate, find_mentions, normalize_tokens, Annotation, Candidate, ConceptGraph, ConceptId, Lexicon, Mention,
    Weight,
};
use crate::language::LanguageTag;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinkerError {
    #[error("linker unavailable: {0}")]
    Unavailable(String),
    #[error("linker returned an invalid response: {0}")]
    BadResponse(String),
}

/// Text plus language in, disambiguated annotation out.
pub trait LinkerBackend<W: Weight>: Send + Sync {
    fn link(&self, text: &str, language: LanguageTag) -> Result<Annotation<W>, LinkerError>;
}

/// The bundled lexicon and concept graph.
#[derive(Clone, Debug)]
pub struct LocalLinker<W> {
    pub lexicon: Lexicon<W>,
    pub graph: ConceptGraph<W>,
}

impl<W: Weight> LocalLinker<W> {
    pub fn new(lexicon: Lexicon<W>, graph: ConceptGraph<W>) -> Self {
        LocalLinker { lexicon, graph }
    }

    pub fn mentions(&self, text: &str, language: LanguageTag) -> Vec<Mention<W>> {
        find_mentions(&normalize_tokens(text, language), language, &self.lexicon)
    }

    pub fn annotate(&self, text: &str, language: LanguageTag) -> Annotation<W> {
        disambiguate(&self.mentions(text, language), &self.graph)
    }
}

impl<W: Weight> LinkerBackend<W> for LocalLinker<W> {
    fn link(&self, text: &str, language: LanguageTag) -> Result<Annotation<W>, LinkerError> {
        Ok(self.annotate(text, language))
    }
}

#[derive(Serialize)]
struct LinkRequest<'a> {
    text: &'a str,
    lang: &'a str,
}

#[derive(Deserialize)]
struct LinkResponse {
    annotations: Vec<RemoteAnnotation>,
}

#[derive(Deserialize)]
struct RemoteAnnotation {
    start: usize,
    end: usize,
    concept: ConceptId,
    score: f64,
}

/// Client for a remote linking service speaking
/// `POST {"text","lang"} -> {"annotations":[{"start","end","concept","score"}]}`,
/// where spans are token offsets into [`normalize_tokens`] of the text.
/// The remote service resolves senses itself, so results are never ambiguous.
pub struct ExternalLinker {
    url: String,
    agent: ureq::Agent,
}

impl ExternalLinker {
    pub fn new(url: impl Into<String>, timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder().timeout_global(Some(timeout)).build().into();
        ExternalLinker { url: url.into(), agent }
    }

    fn fetch(&self, text: &str, language: LanguageTag) -> Result<LinkResponse, LinkerError> {
        let mut resp = self
            .agent
            .post(&self.url)
            .send_json(LinkRequest { text, lang: language.code() })
            .map_err(|e| LinkerError::Unavailable(e.to_string()))?;
        resp.body_mut().read_json().map_err(|e| LinkerError::BadResponse(e.to_string()))
    }
}

impl<W: Weight> LinkerBackend<W> for ExternalLinker {
    fn link(&self, text: &str, language: LanguageTag) -> Result<Annotation<W>, LinkerError> {
        let tokens = normalize_tokens(text, language);
        let resp = self.fetch(text, language)?;
        let mut out = Annotation::default();
        for a in resp.annotations {
            if a.start >= a.end || a.end > tokens.len() {
                return Err(LinkerError::BadResponse(format!("span {}..{} outside {} tokens", a.start, a.end, tokens.len())));
            }
            let prior = W::from_f64(a.score.clamp(f64::MIN_POSITIVE, 1.0))
                .ok_or_else(|| LinkerError::BadResponse(format!("score {}", a.score)))?;
            let mention = Mention {
                surface: tokens[a.start..a.end].join(" "),
                span: (a.start, a.end),
                candidates: vec![Candidate { concept: a.concept, prior }],
            };
            out.concepts.insert(a.concept);
            out.mentions.push((mention, a.concept));
        }
        out.mentions.sort_by_key(|m| m.0.span);
        Ok(out)
    }
}
