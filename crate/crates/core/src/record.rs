//! Harmonized dataset metadata and its two wire formats: CKAN package JSON
//! (input only) and canonical NDJSON.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::language::LanguageTag;

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("invalid JSON: {0}")]
    Parse(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("malformed metadata: {0}")]
    MalformedMetadata(String),
    #[error("network error: {0}")]
    Network(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// One portal dataset's metadata. Field order is the canonical key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetRecord {
    pub portal_id: String,
    pub dataset_id: String,
    pub title: String,
    pub description: String,
    pub keywords: Vec<String>,
    pub landing_url: String,
    pub language: LanguageTag,
    pub publisher: String,
}

impl DatasetRecord {
    pub fn key(&self) -> (&str, &str) {
        (&self.portal_id, &self.dataset_id)
    }
}

fn str_field<'a>(obj: &'a serde_json::Map<String, Value>, key: &str) -> Option<&'a str> {
    obj.get(key).and_then(Value::as_str).filter(|s| !s.is_empty())
}

/// Keeps the first occurrence of each non-empty keyword.
pub fn dedup_keywords<I, S>(raw: I) -> Vec<String>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut out: Vec<String> = Vec::new();
    for k in raw {
        let k = k.into();
        if !k.is_empty() && !out.contains(&k) {
            out.push(k);
        }
    }
    out
}

/// Maps one CKAN package to a record. A `package_show` envelope
/// (`{"success":..., "result":{...}}`) is unwrapped.
pub fn parse_ckan_package(raw: &str, portal_id: &str) -> Result<DatasetRecord, IngestError> {
    let value: Value = serde_json::from_str(raw).map_err(|e| IngestError::Parse(e.to_string()))?;
    ckan_value_to_record(&value, portal_id)
}

pub fn ckan_value_to_record(value: &Value, portal_id: &str) -> Result<DatasetRecord, IngestError> {
    let mut obj = value
        .as_object()
        .ok_or_else(|| IngestError::MalformedMetadata("package is not a JSON object".into()))?;
    if obj.contains_key("success") {
        if let Some(inner) = obj.get("result").and_then(Value::as_object) {
            obj = inner;
        }
    }
    let name = str_field(obj, "name");
    let title = str_field(obj, "title")
        .or(name)
        .ok_or_else(|| IngestError::MalformedMetadata("neither title nor name present".into()))?;
    let dataset_id = str_field(obj, "id")
        .or(name)
        .ok_or_else(|| IngestError::MalformedMetadata("neither id nor name present".into()))?;
    let tags = obj.get("tags").and_then(Value::as_array);
    let keywords = dedup_keywords(
        tags.into_iter()
            .flatten()
            .filter_map(|t| t.get("name").and_then(Value::as_str)),
    );
    let publisher = obj
        .get("organization")
        .and_then(|o| o.get("title"))
        .and_then(Value::as_str)
        .unwrap_or_default();
    Ok(DatasetRecord {
        portal_id: portal_id.to_string(),
        dataset_id: dataset_id.to_string(),
        title: title.to_string(),
        description: obj.get("notes").and_then(Value::as_str).unwrap_or_default().to_string(),
        keywords,
        landing_url: obj.get("url").and_then(Value::as_str).unwrap_or_default().to_string(),
        language: LanguageTag::Und,
        publisher: publisher.to_string(),
    })
}

/// Parses one canonical NDJSON line. Unknown keys, missing keys, wrong types
/// and violated record invariants are all `Schema` errors.
pub fn parse_canonical(line: &str) -> Result<DatasetRecord, IngestError> {
    let value: Value = serde_json::from_str(line).map_err(|e| IngestError::Parse(e.to_string()))?;
    let rec: DatasetRecord =
        serde_json::from_value(value).map_err(|e| IngestError::Schema(e.to_string()))?;
    validate(&rec)?;
    Ok(rec)
}

fn validate(rec: &DatasetRecord) -> Result<(), IngestError> {
    if rec.portal_id.is_empty() {
        return Err(IngestError::Schema("empty portal_id".into()));
    }
    if rec.dataset_id.is_empty() {
        return Err(IngestError::Schema("empty dataset_id".into()));
    }
    if rec.title.is_empty() {
        return Err(IngestError::Schema("empty title".into()));
    }
    if rec.keywords.iter().any(String::is_empty) {
        return Err(IngestError::Schema("empty keyword".into()));
    }
    for (i, k) in rec.keywords.iter().enumerate() {
        if rec.keywords[..i].contains(k) {
            return Err(IngestError::Schema(format!("duplicate keyword {k:?}")));
        }
    }
    Ok(())
}

/// Serializes a record as one compact JSON line, without the trailing newline.
pub fn write_canonical(rec: &DatasetRecord) -> String {
    serde_json::to_string(rec).expect("record serialization is infallible")
}

/// Reads a canonical NDJSON corpus. Blank lines are ignored; errors carry the
/// 1-based line number.
pub fn read_canonical<R: io::BufRead>(reader: R) -> Result<Vec<DatasetRecord>, IngestError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = parse_canonical(&line).map_err(|e| match e {
            IngestError::Parse(m) => IngestError::Parse(format!("line {}: {m}", i + 1)),
            IngestError::Schema(m) => IngestError::Schema(format!("line {}: {m}", i + 1)),
            other => other,
        })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn concat_text(rec: &DatasetRecord) -> String {
    let mut s = String::with_capacity(rec.title.len() + rec.description.len() + 2 + 16 * rec.keywords.len());
    s.push_str(&rec.title);
    s.push('\n');
    s.push_str(&rec.description);
    s.push('\n');
    s.push_str(&rec.keywords.join(" "));
    s
}
