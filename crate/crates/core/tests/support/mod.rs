//! Fixture loading and brute-force reference implementations shared by the
//! integration tests.
#![allow(dead_code)]

pub mod mock_http;
pub mod oracle;

use std::fs;
use std::path::PathBuf;

use odsearch_core::annotate::{annotate_dataset, AnnotatedDataset};
use odsearch_core::engine::SearchEngine;
use odsearch_core::record::read_canonical;
use odsearch_core::{build_index, ConceptIndex, DatasetRecord, Resources};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

pub fn read_fixture(name: &str) -> String {
    let p = fixtures().join(name);
    fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn load_records(name: &str) -> Vec<DatasetRecord> {
    read_canonical(read_fixture(name).as_bytes()).expect("fixture corpus parses")
}

pub fn resources() -> Resources {
    Resources::bundled().expect("bundled resources load")
}

/// The three dog/vienna records followed by the 34 CKAN fixture records.
pub fn mixed_records() -> Vec<DatasetRecord> {
    let mut v = load_records("dogs_vienna.records.ndjson");
    v.extend(load_records("ckan.expected.records.ndjson"));
    v
}

pub fn annotate_all(records: Vec<DatasetRecord>, res: &Resources) -> Vec<AnnotatedDataset> {
    records.into_iter().map(|r| annotate_dataset(r, &res.linker, &res.profiles)).collect()
}

pub fn engine_for(records: Vec<DatasetRecord>) -> SearchEngine {
    let res = resources();
    let index = build_index(annotate_all(records, &res)).expect("unique ids");
    SearchEngine::new(index, res.profiles, res.labels, Box::new(res.linker))
}

pub fn index_for(records: Vec<DatasetRecord>) -> ConceptIndex {
    let res = resources();
    build_index(annotate_all(records, &res)).expect("unique ids")
}
