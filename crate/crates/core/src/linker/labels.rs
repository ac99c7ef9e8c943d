use std::collections::{BTreeMap, HashMap};

use super::{ConceptId, LexiconError};
use crate::language::LanguageTag;

/// Display labels per concept and language.
#[derive(Clone, Debug, Default)]
pub struct Labels {
    by_concept: HashMap<ConceptId, BTreeMap<LanguageTag, String>>,
}

impl Labels {
    /// Parses the TSV format `concept_id\tlang\tlabel`.
    pub fn parse_tsv(text: &str) -> Result<Self, LexiconError> {
        let mut labels = Labels::default();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let err = |message: String| LexiconError::Format { line: i + 1, message };
            let mut cols = line.splitn(3, '\t');
            let (Some(id), Some(lang), Some(label)) = (cols.next(), cols.next(), cols.next()) else {
                return Err(err("expected 3 columns".into()));
            };
            let id: ConceptId = id.parse().map_err(|e| err(format!("{e}")))?;
            let lang: LanguageTag = lang.parse().map_err(|e| err(format!("{e}")))?;
            labels.insert(id, lang, label);
        }
        Ok(labels)
    }

    pub fn insert(&mut self, id: ConceptId, lang: LanguageTag, label: &str) {
        self.by_concept.entry(id).or_default().insert(lang, label.to_string());
    }

    /// Label in `lang`, falling back to English, then to any language, then
    /// to the id itself.
    pub fn label(&self, id: ConceptId, lang: LanguageTag) -> String {
        let Some(m) = self.by_concept.get(&id) else {
            return id.to_string();
        };
        m.get(&lang)
            .or_else(|| m.get(&LanguageTag::En))
            .or_else(|| m.values().next())
            .cloned()
            .unwrap_or_else(|| id.to_string())
    }

    pub fn len(&self) -> usize {
        self.by_concept.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_concept.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fallback_chain() {
        let l = Labels::parse_tsv("c:00000001\ten\tdog\nc:00000001\tde\tHund\nc:00000002\tfi\tkoira\n").unwrap();
        let c = |n| ConceptId::new(n).unwrap();
        assert_eq!(l.label(c(1), LanguageTag::De), "Hund");
        assert_eq!(l.label(c(1), LanguageTag::It), "dog");
        assert_eq!(l.label(c(2), LanguageTag::En), "koira");
        assert_eq!(l.label(c(3), LanguageTag::En), "c:00000003");
    }
}
