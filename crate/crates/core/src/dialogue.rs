//! Conversational search as a finite state machine.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::engine::{display_language, SearchEngine, MAX_SUGGESTIONS};
use crate::index::{Ordinal, ResultSet};
use crate::language::LanguageTag;
use crate::linker::{ConceptId, LinkerError, Mention};

pub const PAGE_SIZE: usize = 5;

pub const GREETING: &str =
    "Hi! Tell me what kind of open data you are looking for, in any of German, English, Spanish, Finnish, French, Italian or Portuguese.";
pub const EXAMPLE_QUERIES: [&str; 3] = ["dogs in vienna", "air quality", "Fahrradwege Graz"];

/// A query mention waiting for the user to pick a sense.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PendingMention {
    pub surface: String,
    pub span: (usize, usize),
    /// At least two senses, in candidate order.
    pub senses: Vec<ConceptId>,
}

impl PendingMention {
    fn from_mention(m: &Mention<f64>) -> Self {
        PendingMention { surface: m.surface.clone(), span: m.span, senses: m.candidates.iter().map(|c| c.concept).collect() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum DialogueState {
    #[default]
    Idle,
    Presenting {
        query_concepts: BTreeSet<ConceptId>,
        active_filters: BTreeSet<ConceptId>,
        hit_ordinals: Vec<Ordinal>,
        page: usize,
    },
    Clarifying {
        pending_mention: PendingMention,
        resolved_concepts: BTreeSet<ConceptId>,
        /// Further ambiguous mentions of the same query, asked in turn.
        queued: Vec<PendingMention>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DialogueSession {
    pub session_id: String,
    pub state: DialogueState,
    pub language_pref: Option<LanguageTag>,
    /// Milliseconds since the Unix epoch.
    pub last_activity: u64,
}

impl DialogueSession {
    pub fn new(session_id: impl Into<String>, now_ms: u64) -> Self {
        DialogueSession {
            session_id: session_id.into(),
            state: DialogueState::Idle,
            language_pref: None,
            last_activity: now_ms,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "concept", rename_all = "snake_case")]
pub enum Payload {
    Refine(ConceptId),
    Sense(ConceptId),
    More,
    Reset,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    UserText { text: String },
    PickSuggestion { payload: Payload },
    More,
    Reset,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Card {
    pub title: String,
    pub portal_id: String,
    pub dataset_id: String,
    pub language: LanguageTag,
    pub landing_url: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestion {
    pub label: String,
    pub payload: Payload,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReplyKind {
    Greeting,
    Results,
    Clarification,
    NoConcepts,
    EndOfResults,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BotReply {
    pub kind: ReplyKind,
    pub text: String,
    pub cards: Vec<Card>,
    pub suggestions: Vec<Suggestion>,
}

impl BotReply {
    fn text(kind: ReplyKind, text: impl Into<String>) -> Self {
        BotReply { kind, text: text.into(), cards: Vec::new(), suggestions: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DialogueError {
    #[error("{0}")]
    LinkerUnavailable(LinkerError),
}

pub const APOLOGY: &str = "Sorry, I cannot understand queries right now because the concept linker is unavailable. Please try again later.";

fn quote_list(items: &[String]) -> String {
    match items.len() {
        0 => String::new(),
        1 => items[0].clone(),
        n => format!("{} and {}", items[..n - 1].join(", "), items[n - 1]),
    }
}

/// Advances the session by one event. Invalid events produce an error reply
/// and leave the state untouched; so does an unavailable linker, reported as
/// `Err`.
pub fn step(
    session: &mut DialogueSession,
    event: &Event,
    engine: &SearchEngine,
    now_ms: u64,
) -> Result<BotReply, DialogueError> {
    let reply = match (event, &session.state) {
        (Event::Reset, _) | (Event::PickSuggestion { payload: Payload::Reset }, _) => {
            session.state = DialogueState::Idle;
            BotReply::text(ReplyKind::Greeting, GREETING)
        }
        (Event::UserText { text }, _) => user_text(session, text, engine)?,
        (Event::More, DialogueState::Presenting { .. })
        | (Event::PickSuggestion { payload: Payload::More }, DialogueState::Presenting { .. }) => more(session, engine),
        (Event::PickSuggestion { payload: Payload::Sense(c) }, DialogueState::Clarifying { pending_mention, .. })
            if pending_mention.senses.contains(c) =>
        {
            pick_sense(session, *c, engine)
        }
        (
            Event::PickSuggestion { payload: Payload::Refine(c) },
            DialogueState::Presenting { query_concepts, active_filters, hit_ordinals, .. },
        ) if !query_concepts.contains(c)
            && !active_filters.contains(c)
            && hit_ordinals.iter().any(|o| engine.index.dataset(*o).is_some_and(|d| d.has(*c))) =>
        {
            let mut filters = active_filters.clone();
            filters.insert(*c);
            let query = query_concepts.clone();
            present(session, engine, query, filters)
        }
        _ => BotReply::text(ReplyKind::Error, "That option is not available right now."),
    };
    session.last_activity = now_ms;
    Ok(reply)
}

fn user_text(session: &mut DialogueSession, text: &str, engine: &SearchEngine) -> Result<BotReply, DialogueError> {
    let a = engine.analyze(text, None, session.language_pref).map_err(DialogueError::LinkerUnavailable)?;
    if !a.has_mentions() {
        return Ok(BotReply::text(
            ReplyKind::NoConcepts,
            format!(
                "Sorry, I did not recognize any topic in that. Try for example: {}.",
                EXAMPLE_QUERIES.iter().map(|q| format!("\"{q}\"")).collect::<Vec<_>>().join(", ")
            ),
        ));
    }
    if session.language_pref.is_none() && a.confidently_detected() {
        session.language_pref = Some(a.detected);
    }
    if let Some((first, rest)) = a.ambiguous.split_first() {
        session.state = DialogueState::Clarifying {
            pending_mention: PendingMention::from_mention(first),
            resolved_concepts: a.concepts,
            queued: rest.iter().map(PendingMention::from_mention).collect(),
        };
        return Ok(clarify(session, engine));
    }
    Ok(present(session, engine, a.concepts, BTreeSet::new()))
}

fn pick_sense(session: &mut DialogueSession, sense: ConceptId, engine: &SearchEngine) -> BotReply {
    let DialogueState::Clarifying { resolved_concepts, queued, .. } = &session.state else {
        unreachable!("pick_sense outside Clarifying")
    };
    let mut resolved = resolved_concepts.clone();
    resolved.insert(sense);
    let mut queued = queued.clone();
    if queued.is_empty() {
        return present(session, engine, resolved, BTreeSet::new());
    }
    let next = queued.remove(0);
    session.state = DialogueState::Clarifying { pending_mention: next, resolved_concepts: resolved, queued };
    clarify(session, engine)
}

fn lang(session: &DialogueSession) -> LanguageTag {
    display_language(session.language_pref.unwrap_or(LanguageTag::En))
}

fn clarify(session: &DialogueSession, engine: &SearchEngine) -> BotReply {
    let DialogueState::Clarifying { pending_mention, .. } = &session.state else {
        unreachable!("clarify outside Clarifying")
    };
    let lang = lang(session);
    let labels: Vec<String> = pending_mention.senses.iter().map(|c| engine.label(*c, lang)).collect();
    let options: Vec<String> = labels.iter().map(|l| format!("as {l}")).collect();
    let text = format!("Did you mean \"{}\" {}?", pending_mention.surface, options.join(" or "));
    let mut suggestions: Vec<Suggestion> = pending_mention
        .senses
        .iter()
        .zip(labels)
        .map(|(c, label)| Suggestion { label, payload: Payload::Sense(*c) })
        .take(MAX_SUGGESTIONS - 1)
        .collect();
    suggestions.push(Suggestion { label: "Start over".into(), payload: Payload::Reset });
    BotReply { kind: ReplyKind::Clarification, text, cards: Vec::new(), suggestions }
}

/// Enters `Presenting` at page 0 for a query with filters.
fn present(
    session: &mut DialogueSession,
    engine: &SearchEngine,
    query: BTreeSet<ConceptId>,
    filters: BTreeSet<ConceptId>,
) -> BotReply {
    let result = engine.retrieve(&query, &filters);
    let lang = lang(session);
    let names = |set: &BTreeSet<ConceptId>| quote_list(&set.iter().map(|c| engine.label(*c, lang)).collect::<Vec<_>>());
    let mut text = match result.hits.len() {
        0 => format!("I found no datasets about {}", names(&query)),
        1 => format!("I found 1 dataset about {}", names(&query)),
        n => format!("I found {n} datasets about {}", names(&query)),
    };
    if !filters.is_empty() {
        let verb = if result.hits.len() == 1 { "covers" } else { "cover" };
        text.push_str(&format!(" that also {verb} {}", names(&filters)));
    }
    text.push('.');
    session.state = DialogueState::Presenting {
        query_concepts: query,
        active_filters: filters,
        hit_ordinals: result.ordinals(),
        page: 0,
    };
    let mut reply = page_reply(session, engine, &result, text);
    if result.hits.is_empty() {
        reply.suggestions.push(Suggestion { label: "Start over".into(), payload: Payload::Reset });
    }
    reply
}

fn more(session: &mut DialogueSession, engine: &SearchEngine) -> BotReply {
    let DialogueState::Presenting { query_concepts, active_filters, hit_ordinals, page } = &mut session.state else {
        unreachable!("more outside Presenting")
    };
    if (*page + 1) * PAGE_SIZE >= hit_ordinals.len() {
        return BotReply::text(ReplyKind::EndOfResults, "There are no further results.");
    }
    *page += 1;
    let (query, filters) = (query_concepts.clone(), active_filters.clone());
    let result = engine.retrieve(&query, &filters);
    let shown = (*page * PAGE_SIZE + 1, ((*page + 1) * PAGE_SIZE).min(hit_ordinals.len()));
    let last = shown.1 == hit_ordinals.len();
    let mut text = format!("Results {} to {} of {}.", shown.0, shown.1, hit_ordinals.len());
    if last {
        text.push_str(" There are no further results.");
    }
    page_reply(session, engine, &result, text)
}

/// Cards of the current page, then a MORE chip when another page exists,
/// then refinement chips up to the chip limit.
fn page_reply(session: &DialogueSession, engine: &SearchEngine, result: &ResultSet, text: String) -> BotReply {
    let DialogueState::Presenting { page, .. } = &session.state else {
        unreachable!("page_reply outside Presenting")
    };
    let lang = lang(session);
    let cards = engine
        .hit_views(result, page * PAGE_SIZE, PAGE_SIZE)
        .into_iter()
        .map(|h| Card {
            title: h.title,
            portal_id: h.portal,
            dataset_id: h.dataset_id,
            language: h.language,
            landing_url: h.landing_url,
        })
        .collect();
    let has_more = (page + 1) * PAGE_SIZE < result.hits.len();
    let mut suggestions = Vec::new();
    if has_more {
        suggestions.push(Suggestion { label: "More results".into(), payload: Payload::More });
    }
    let k = MAX_SUGGESTIONS - suggestions.len();
    suggestions.extend(
        engine
            .index
            .top_cooccurring(result, k)
            .into_iter()
            .map(|(c, _)| Suggestion { label: engine.label(c, lang), payload: Payload::Refine(c) }),
    );
    BotReply { kind: ReplyKind::Results, text, cards, suggestions }
}
