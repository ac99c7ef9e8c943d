//! Immutable inverted index from concepts to dataset ordinals.

mod persist;

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::annotate::AnnotatedDataset;
use crate::linker::ConceptId;
use crate::record::DatasetRecord;

pub use persist::{load_index, read_index, save_index, write_index, FORMAT_VERSION, MAGIC};

#[derive(Debug, thiserror::Error)]
pub enum IndexError {
    #[error("duplicate dataset {portal_id}/{dataset_id}")]
    DuplicateDataset { portal_id: String, dataset_id: String },
    #[error("index format version {found}, expected {expected}")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("corrupt index: {0}")]
    CorruptIndex(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Ordinal = u32;

/// A stored dataset: the full record and its ascending concept list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedDataset {
    pub record: DatasetRecord,
    pub concepts: Vec<ConceptId>,
}

impl IndexedDataset {
    pub fn has(&self, c: ConceptId) -> bool {
        self.concepts.binary_search(&c).is_ok()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConceptIndex {
    records: Vec<IndexedDataset>,
    ordinals: HashMap<(String, String), Ordinal>,
    postings: BTreeMap<ConceptId, Vec<Ordinal>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Hit {
    pub ordinal: Ordinal,
    pub score: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResultSet {
    pub hits: Vec<Hit>,
    pub query_concepts: BTreeSet<ConceptId>,
    pub active_filters: BTreeSet<ConceptId>,
}

impl ResultSet {
    pub fn ordinals(&self) -> Vec<Ordinal> {
        self.hits.iter().map(|h| h.ordinal).collect()
    }
}

/// Builds an index; ordinals follow input order from 0.
pub fn build_index<I>(datasets: I) -> Result<ConceptIndex, IndexError>
where
    I: IntoIterator<Item = AnnotatedDataset>,
{
    let mut index = ConceptIndex::default();
    for a in datasets {
        index.push(a.record, a.concepts)?;
    }
    Ok(index)
}

impl ConceptIndex {
    fn push(&mut self, record: DatasetRecord, mut concepts: Vec<ConceptId>) -> Result<Ordinal, IndexError> {
        let key = (record.portal_id.clone(), record.dataset_id.clone());
        if self.ordinals.contains_key(&key) {
            return Err(IndexError::DuplicateDataset { portal_id: key.0, dataset_id: key.1 });
        }
        let ordinal = Ordinal::try_from(self.records.len()).expect("fewer than 2^32 datasets");
        concepts.sort_unstable();
        concepts.dedup();
        for c in &concepts {
            self.postings.entry(*c).or_default().push(ordinal);
        }
        self.ordinals.insert(key, ordinal);
        self.records.push(IndexedDataset { record, concepts });
        Ok(ordinal)
    }

    pub(crate) fn from_parts(
        records: Vec<IndexedDataset>,
        postings: BTreeMap<ConceptId, Vec<Ordinal>>,
    ) -> Result<Self, IndexError> {
        let corrupt = |m: String| IndexError::CorruptIndex(m);
        let mut index = ConceptIndex::default();
        for r in records {
            if !r.concepts.windows(2).all(|w| w[0] < w[1]) {
                return Err(corrupt(format!("concepts of {} not strictly ascending", r.record.dataset_id)));
            }
            index.push(r.record, r.concepts).map_err(|e| corrupt(e.to_string()))?;
        }
        if index.postings != postings {
            return Err(corrupt("postings disagree with record concepts".into()));
        }
        Ok(index)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn concept_count(&self) -> usize {
        self.postings.len()
    }

    pub fn dataset(&self, ordinal: Ordinal) -> Option<&IndexedDataset> {
        self.records.get(ordinal as usize)
    }

    pub fn datasets(&self) -> &[IndexedDataset] {
        &self.records
    }

    pub fn ordinal(&self, portal_id: &str, dataset_id: &str) -> Option<Ordinal> {
        self.ordinals.get(&(portal_id.to_string(), dataset_id.to_string())).copied()
    }

    pub fn postings(&self, c: ConceptId) -> &[Ordinal] {
        self.postings.get(&c).map_or(&[], Vec::as_slice)
    }

    /// Concepts with at least one posting, ascending.
    pub fn concepts(&self) -> impl Iterator<Item = ConceptId> + '_ {
        self.postings.keys().copied()
    }

    pub(crate) fn posting_map(&self) -> &BTreeMap<ConceptId, Vec<Ordinal>> {
        &self.postings
    }

    /// Datasets annotated with any query concept, ranked by the number of
    /// matching concepts, then concept-set size (desc), then ordinal.
    pub fn search_any(&self, query_concepts: &BTreeSet<ConceptId>) -> ResultSet {
        let mut scores: HashMap<Ordinal, u32> = HashMap::new();
        for c in query_concepts {
            for &o in self.postings(*c) {
                *scores.entry(o).or_insert(0) += 1;
            }
        }
        let mut hits: Vec<Hit> = scores.into_iter().map(|(ordinal, score)| Hit { ordinal, score }).collect();
        hits.sort_unstable_by_key(|h| (Reverse(h.score), Reverse(self.records[h.ordinal as usize].concepts.len()), h.ordinal));
        ResultSet { hits, query_concepts: query_concepts.clone(), active_filters: BTreeSet::new() }
    }

    /// Keeps the hits annotated with every selected concept, in their
    /// existing order and with their existing scores.
    pub fn refine(&self, result: &ResultSet, selected: &BTreeSet<ConceptId>) -> ResultSet {
        let hits = result
            .hits
            .iter()
            .filter(|h| {
                let d = &self.records[h.ordinal as usize];
                selected.iter().all(|c| d.has(*c))
            })
            .copied()
            .collect();
        ResultSet {
            hits,
            query_concepts: result.query_concepts.clone(),
            active_filters: result.active_filters.union(selected).copied().collect(),
        }
    }

    /// The `k` concepts occurring in most hits, excluding query and filter
    /// concepts; ties by ascending id.
    pub fn top_cooccurring(&self, result: &ResultSet, k: usize) -> Vec<(ConceptId, usize)> {
        if k == 0 {
            return Vec::new();
        }
        let mut counts: HashMap<ConceptId, usize> = HashMap::new();
        for h in &result.hits {
            for c in &self.records[h.ordinal as usize].concepts {
                if !result.query_concepts.contains(c) && !result.active_filters.contains(c) {
                    *counts.entry(*c).or_insert(0) += 1;
                }
            }
        }
        let mut ranked: Vec<(ConceptId, usize)> = counts.into_iter().collect();
        ranked.sort_unstable_by_key(|&(c, n)| (Reverse(n), c));
        ranked.truncate(k);
        ranked
    }
}
