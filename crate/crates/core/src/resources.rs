//! Bundled linguistic resources, with optional on-disk overrides.

use std::fs;
use std::path::{Path, PathBuf};

use crate::language::LanguageTag;
use crate::langid::{LangIdError, LanguageProfile};
use crate::linker::{ConceptGraph, Labels, Lexicon, LexiconError, LocalLinker, Weight};

pub const LEXICON_TSV: &str = include_str!("../resources/lexicon.tsv");
pub const GRAPH_TSV: &str = include_str!("../resources/graph.tsv");
pub const LABELS_TSV: &str = include_str!("../resources/labels.tsv");

const PROFILES: [(LanguageTag, &str); 7] = [
    (LanguageTag::De, include_str!("../resources/profiles/de.profile")),
    (LanguageTag::En, include_str!("../resources/profiles/en.profile")),
    (LanguageTag::Es, include_str!("../resources/profiles/es.profile")),
    (LanguageTag::Fi, include_str!("../resources/profiles/fi.profile")),
    (LanguageTag::Fr, include_str!("../resources/profiles/fr.profile")),
    (LanguageTag::It, include_str!("../resources/profiles/it.profile")),
    (LanguageTag::Pt, include_str!("../resources/profiles/pt.profile")),
];

const TRAINING: [(LanguageTag, &str); 7] = [
    (LanguageTag::De, include_str!("../resources/training/de.txt")),
    (LanguageTag::En, include_str!("../resources/training/en.txt")),
    (LanguageTag::Es, include_str!("../resources/training/es.txt")),
    (LanguageTag::Fi, include_str!("../resources/training/fi.txt")),
    (LanguageTag::Fr, include_str!("../resources/training/fr.txt")),
    (LanguageTag::It, include_str!("../resources/training/it.txt")),
    (LanguageTag::Pt, include_str!("../resources/training/pt.txt")),
];

#[derive(Debug, thiserror::Error)]
pub enum ResourceError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{what}: {source}")]
    Lexicon { what: String, source: LexiconError },
    #[error("{what}: {source}")]
    Profile { what: String, source: LangIdError },
}

/// Training text the bundled profile for `lang` was built from.
pub fn training_text(lang: LanguageTag) -> Option<&'static str> {
    TRAINING.iter().find(|(l, _)| *l == lang).map(|(_, t)| *t)
}

/// Serialized bundled profile for `lang`.
pub fn bundled_profile_text(lang: LanguageTag) -> Option<&'static str> {
    PROFILES.iter().find(|(l, _)| *l == lang).map(|(_, t)| *t)
}

pub fn bundled_profiles() -> Result<Vec<LanguageProfile>, ResourceError> {
    PROFILES
        .iter()
        .map(|(lang, text)| {
            LanguageProfile::parse_file(text)
                .map_err(|source| ResourceError::Profile { what: format!("bundled {lang} profile"), source })
        })
        .collect()
}

/// Override locations; `None` selects the bundled copy.
#[derive(Clone, Debug, Default)]
pub struct ResourcePaths {
    pub lexicon: Option<PathBuf>,
    pub graph: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    /// Directory of `*.profile` files.
    pub profiles: Option<PathBuf>,
}

/// Everything the linker and language identifier need.
#[derive(Clone, Debug)]
pub struct Resources<W> {
    pub profiles: Vec<LanguageProfile>,
    pub linker: LocalLinker<W>,
    pub labels: Labels,
}

fn read(path: &Path) -> Result<String, ResourceError> {
    fs::read_to_string(path).map_err(|source| ResourceError::Io { path: path.to_path_buf(), source })
}

impl<W: Weight> Resources<W> {
    pub fn bundled() -> Result<Self, ResourceError> {
        Self::load(&ResourcePaths::default())
    }

    pub fn load(paths: &ResourcePaths) -> Result<Self, ResourceError> {
        let text = |p: &Option<PathBuf>, bundled: &'static str| -> Result<(String, String), ResourceError> {
            match p {
                Some(p) => Ok((read(p)?, p.display().to_string())),
                None => Ok((bundled.to_string(), "bundled".to_string())),
            }
        };
        let (lex, what) = text(&paths.lexicon, LEXICON_TSV)?;
        let lexicon = Lexicon::parse_tsv(&lex)
            .map_err(|source| ResourceError::Lexicon { what: format!("{what} lexicon"), source })?;
        let (gr, what) = text(&paths.graph, GRAPH_TSV)?;
        let graph = ConceptGraph::parse_tsv(&gr)
            .map_err(|source| ResourceError::Lexicon { what: format!("{what} graph"), source })?;
        let (lb, what) = text(&paths.labels, LABELS_TSV)?;
        let labels =
            Labels::parse_tsv(&lb).map_err(|source| ResourceError::Lexicon { what: format!("{what} labels"), source })?;
        let profiles = match &paths.profiles {
            None => bundled_profiles()?,
            Some(dir) => load_profile_dir(dir)?,
        };
        Ok(Resources { profiles, linker: LocalLinker::new(lexicon, graph), labels })
    }
}

fn load_profile_dir(dir: &Path) -> Result<Vec<LanguageProfile>, ResourceError> {
    let entries = fs::read_dir(dir).map_err(|source| ResourceError::Io { path: dir.to_path_buf(), source })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "profile"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for f in files {
        let p = LanguageProfile::parse_file(&read(&f)?)
            .map_err(|source| ResourceError::Profile { what: f.display().to_string(), source })?;
        out.push(p);
    }
    if out.is_empty() {
        return Err(ResourceError::Profile {
            what: dir.display().to_string(),
            source: LangIdError::InvalidProfile("no *.profile files".into()),
        });
    }
    Ok(out)
}
