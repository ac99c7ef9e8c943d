//! Dataset annotation: language detection plus concept linking over the
//! concatenated title, description and keywords.

use std::io;

use serde::{Deserialize, Serialize};

use crate::langid::{detect_language, LanguageProfile};
use crate::linker::{ConceptId, LocalLinker, Weight};
use crate::record::{concat_text, DatasetRecord, IngestError};

/// A linked span of the concatenated text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkedMention {
    pub surface: String,
    pub start: usize,
    pub end: usize,
    pub concept: ConceptId,
}

/// A record with its language filled in and its concept set, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnotatedDataset {
    pub record: DatasetRecord,
    pub concepts: Vec<ConceptId>,
    pub mentions: Vec<LinkedMention>,
}

/// Annotates one record. The language is detected only when the record
/// still says `und`. Ambiguous mentions are settled by prior (ties: smaller
/// id), so every dataset gets a concept set without asking anyone.
pub fn annotate_dataset<W: Weight>(
    mut record: DatasetRecord,
    linker: &LocalLinker<W>,
    profiles: &[LanguageProfile],
) -> AnnotatedDataset {
    let text = concat_text(&record);
    if record.language.is_und() {
        record.language = detect_language(&text, profiles).0;
    }
    let annotation = linker.annotate(&text, record.language);
    let mut mentions: Vec<LinkedMention> = annotation
        .mentions
        .iter()
        .map(|(m, c)| LinkedMention { surface: m.surface.clone(), start: m.span.0, end: m.span.1, concept: *c })
        .collect();
    for m in &annotation.ambiguous {
        let best = m
            .candidates
            .iter()
            .reduce(|a, b| if b.prior > a.prior || (b.prior == a.prior && b.concept < a.concept) { b } else { a })
            .expect("ambiguous mentions carry candidates");
        mentions.push(LinkedMention { surface: m.surface.clone(), start: m.span.0, end: m.span.1, concept: best.concept });
    }
    mentions.sort_by_key(|m| (m.start, m.end));
    let mut concepts: Vec<ConceptId> = mentions.iter().map(|m| m.concept).collect();
    concepts.sort_unstable();
    concepts.dedup();
    AnnotatedDataset { record, concepts, mentions }
}

pub fn write_annotated(a: &AnnotatedDataset) -> String {
    serde_json::to_string(a).expect("annotation serialization is infallible")
}

pub fn parse_annotated(line: &str) -> Result<AnnotatedDataset, IngestError> {
    let value: serde_json::Value = serde_json::from_str(line).map_err(|e| IngestError::Parse(e.to_string()))?;
    serde_json::from_value(value).map_err(|e| IngestError::Schema(e.to_string()))
}

pub fn read_annotated<R: io::BufRead>(reader: R) -> Result<Vec<AnnotatedDataset>, IngestError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_annotated(&line).map_err(|e| match e {
            IngestError::Parse(m) => IngestError::Parse(format!("line {}: {m}", i + 1)),
            IngestError::Schema(m) => IngestError::Schema(format!("line {}: {m}", i + 1)),
            other => other,
        })?);
    }
    Ok(out)
}
