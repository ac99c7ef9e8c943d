//! Cross-lingual open dataset search.
//!
//! Portal metadata is harvested into [`DatasetRecord`]s, tagged with a
//! language, linked to language-independent [`ConceptId`]s and indexed by
//! concept. Queries in any supported language are linked the same way, so a
//! query in one language retrieves datasets described in another.

pub mod annotate;
pub mod dialogue;
pub mod engine;
pub mod harvest;
pub mod index;
pub mod langid;
pub mod language;
pub mod linker;
pub mod record;
pub mod resources;
pub mod synth;

pub use annotate::{annotate_dataset, AnnotatedDataset};
pub use engine::SearchEngine;
pub use index::{build_index, ConceptIndex, IndexError, ResultSet};
pub use language::LanguageTag;
pub use linker::{ConceptId, Weight};
pub use record::{concat_text, parse_canonical, parse_ckan_package, write_canonical, DatasetRecord, IngestError};

pub type Lexicon = linker::Lexicon<f64>;
pub type ConceptGraph = linker::ConceptGraph<f64>;
pub type Mention = linker::Mention<f64>;
pub type Annotation = linker::Annotation<f64>;
pub type LocalLinker = linker::LocalLinker<f64>;
pub type Resources = resources::Resources<f64>;
