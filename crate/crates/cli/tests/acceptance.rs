//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p odsearch-cli --test acceptance`.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeSet;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use odsearch_core::annotate::{parse_annotated, write_annotated};
use odsearch_core::dialogue::{step, BotReply, DialogueSession, DialogueState, Event};
use odsearch_core::harvest::{harvest_portal, reference_portals, HarvestOptions, PortalSpec, Source};
use odsearch_core::index::{load_index, save_index, write_index};
use odsearch_core::langid::{build_profile, detect_language};
use odsearch_core::resources::training_text;
use odsearch_core::synth::{synth_corpus, synth_queries};
use odsearch_core::{
    annotate_dataset, build_index, AnnotatedDataset, ConceptId, ConceptIndex, DatasetRecord, LanguageTag, ResultSet,
    SearchEngine,
};
use odsearch_service::{serve_on, AppState, DEFAULT_TTL_MS};

use support::oracle;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn c(n: u32) -> ConceptId {
    ConceptId::new(n).unwrap()
}

fn id(s: &str) -> ConceptId {
    s.parse().unwrap()
}

const DOG: &str = "c:00000001";
const VIENNA: &str = "c:00000241";
const FRUIT: &str = "c:00000161";
const COMPANY: &str = "c:00000162";

fn placeholder(i: usize) -> DatasetRecord {
    DatasetRecord {
        portal_id: "p".into(),
        dataset_id: format!("d{i}"),
        title: format!("d{i}"),
        description: String::new(),
        keywords: vec![],
        landing_url: String::new(),
        language: LanguageTag::Und,
        publisher: String::new(),
    }
}

fn hits(rs: &ResultSet) -> Vec<(u32, u32)> {
    rs.hits.iter().map(|h| (h.ordinal, h.score)).collect()
}

fn random_set(rng: &mut ChaCha8Rng, max_concept: u32, max_len: usize) -> BTreeSet<ConceptId> {
    let n = rng.random_range(0..=max_len);
    (0..n).map(|_| c(rng.random_range(1..=max_concept))).collect()
}

fn oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let corpora = 1000;
    let mut checks = 0usize;
    for k in 0..corpora {
        let docs = rng.random_range(0..=500);
        let max_concept = rng.random_range(1..=64);
        let corpus: Vec<Vec<ConceptId>> = (0..docs)
            .map(|_| {
                let n = rng.random_range(0..=8);
                (0..n).map(|_| c(rng.random_range(1..=max_concept))).collect()
            })
            .collect();
        let index = build_index(corpus.iter().enumerate().map(|(i, cs)| AnnotatedDataset {
            record: placeholder(i),
            concepts: cs.clone(),
            mentions: vec![],
        }))
        .map_err(|e| e.to_string())?;
        for _ in 0..5 {
            let q = random_set(&mut rng, max_concept, 4);
            let f = random_set(&mut rng, max_concept, 2);
            let top = rng.random_range(0..=8);
            let rs = index.search_any(&q);
            let want = oracle::search_any(&corpus, &q);
            ensure!(hits(&rs) == want, "search_any differs on corpus {k} for {q:?}");
            let refined = index.refine(&rs, &f);
            let want_refined = oracle::refine(&corpus, &want, &f);
            ensure!(hits(&refined) == want_refined, "refine differs on corpus {k}");
            let excluded: BTreeSet<ConceptId> = q.union(&f).copied().collect();
            ensure!(
                index.top_cooccurring(&refined, top) == oracle::top_cooccurring(&corpus, &want_refined, &excluded, top),
                "top_cooccurring differs on corpus {k}"
            );
            checks += 3;
        }
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("{corpora} corpora, {checks} comparisons, {elapsed:.2?}"))
}

fn ranking_example() -> Outcome {
    let index = support::index_for(support::load_records("dogs_vienna.records.ndjson"));
    let q: BTreeSet<ConceptId> = [id(DOG), id(VIENNA)].into_iter().collect();
    let rs = index.search_any(&q);
    let both: Vec<usize> =
        rs.hits.iter().enumerate().filter(|(_, h)| q.iter().all(|c| index.dataset(h.ordinal).unwrap().has(*c))).map(|(i, _)| i).collect();
    let single: Vec<usize> = rs.hits.iter().enumerate().filter(|(_, h)| h.score == 1).map(|(i, _)| i).collect();
    ensure!(both.len() == 1, "expected one dataset with both concepts, got {}", both.len());
    ensure!(!single.is_empty(), "no single-concept datasets");
    ensure!(single.iter().all(|s| *s > both[0]), "ranks: both at {}, singles at {single:?}", both[0]);
    let title = &index.dataset(rs.hits[both[0]].ordinal).unwrap().record.title;
    ensure!(rs.hits[both[0]].score > rs.hits[single[0]].score, "score not strictly higher");
    Ok(format!("\"{title}\" ranked 1 of {}", rs.hits.len()))
}

fn refine_matches_definition(index: &ConceptIndex, rs: &ResultSet, s: &BTreeSet<ConceptId>) -> bool {
    let want: Vec<u32> = rs.hits.iter().filter(|h| s.iter().all(|c| index.dataset(h.ordinal).unwrap().has(*c))).map(|h| h.ordinal).collect();
    index.refine(rs, s).ordinals() == want
}

fn and_or_semantics(synth_index: &ConceptIndex) -> Outcome {
    // Exhaustive over the mixed fixture: every single-concept query against
    // every filter set of up to two concepts drawn from the full vocabulary.
    let index = support::index_for(support::mixed_records());
    let vocab: Vec<ConceptId> = index.concepts().collect();
    let mut fixture_checks = 0usize;
    for q in &vocab {
        let rs = index.search_any(&[*q].into_iter().collect());
        for (i, a) in vocab.iter().enumerate() {
            for b in &vocab[i..] {
                let s: BTreeSet<ConceptId> = [*a, *b].into_iter().collect();
                ensure!(refine_matches_definition(&index, &rs, &s), "fixture query {q} filter {s:?}");
                fixture_checks += 1;
            }
        }
        // OR: a hit of a multi-concept query carries at least one query concept.
        let pair: BTreeSet<ConceptId> = [*q, vocab[0]].into_iter().collect();
        let rs = index.search_any(&pair);
        let union: BTreeSet<u32> = pair.iter().flat_map(|c| index.postings(*c).iter().copied()).collect();
        ensure!(rs.ordinals().into_iter().collect::<BTreeSet<_>>() == union, "OR semantics for {pair:?}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let vocab: Vec<ConceptId> = synth_index.concepts().collect();
    let mut scale_checks = 0usize;
    for _ in 0..2000 {
        let q: BTreeSet<ConceptId> = (0..rng.random_range(1..=3)).map(|_| *vocab.choose(&mut rng).unwrap()).collect();
        let s: BTreeSet<ConceptId> = (0..rng.random_range(0..=3)).map(|_| *vocab.choose(&mut rng).unwrap()).collect();
        let rs = synth_index.search_any(&q);
        ensure!(refine_matches_definition(synth_index, &rs, &s), "synthetic query {q:?} filter {s:?}");
        scale_checks += 1;
    }
    Ok(format!("{fixture_checks} fixture and {scale_checks} synthetic refinements"))
}

fn cross_lingual() -> Outcome {
    let engine = support::engine_for(support::mixed_records());
    let en = engine.search("dogs", None).map_err(|e| e.to_string())?;
    let de = engine.search("hunde", None).map_err(|e| e.to_string())?;
    let set = |r: &odsearch_core::engine::SearchResponse| {
        r.hits.iter().map(|h| (h.portal.clone(), h.dataset_id.clone())).collect::<BTreeSet<_>>()
    };
    ensure!(!en.hits.is_empty(), "no hits for dogs");
    ensure!(set(&en) == set(&de), "dogs {:?} vs hunde {:?}", set(&en), set(&de));
    let langs: BTreeSet<LanguageTag> = en.hits.iter().map(|h| h.language).collect();
    Ok(format!("{} identical hits across {} languages", en.hits.len(), langs.len()))
}

fn language_id() -> Outcome {
    let started = Instant::now();
    let profiles = LanguageTag::KNOWN
        .iter()
        .map(|l| build_profile(training_text(*l).unwrap(), *l))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let mut correct = 0;
    let mut total = 0;
    for line in support::read_fixture("langid_sentences.tsv").lines() {
        let (gold, text) = line.split_once('\t').ok_or("bad fixture line")?;
        let gold: LanguageTag = gold.parse().map_err(|e| format!("{e}"))?;
        total += 1;
        if detect_language(text, &profiles).0 == gold {
            correct += 1;
        }
    }
    let mut own = 0;
    for l in LanguageTag::KNOWN {
        if detect_language(training_text(l).unwrap(), &profiles).0 == l {
            own += 1;
        }
    }
    let elapsed = started.elapsed();
    ensure!(total == 70, "fixture has {total} sentences");
    ensure!(correct >= 63, "{correct}/70 correct");
    ensure!(own == 7, "self-identification {own}/7");
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!("{correct}/70 sentences, {own}/7 training texts, {elapsed:.2?}"))
}

fn disambiguation() -> Outcome {
    let res = support::resources();
    let a = res.linker.annotate("apple orchard", LanguageTag::En);
    ensure!(a.concepts.contains(&id(FRUIT)), "apple orchard lacks the fruit sense: {:?}", a.concepts);
    ensure!(!a.concepts.contains(&id(COMPANY)), "apple orchard kept the company sense");
    ensure!(a.ambiguous.is_empty(), "apple orchard left ambiguity");

    let engine = support::engine_for(support::mixed_records());
    let mut s = DialogueSession::new("acceptance", 0);
    let reply = step(&mut s, &Event::UserText { text: "apple".into() }, &engine, 0).map_err(|e| e.to_string())?;
    ensure!(matches!(s.state, DialogueState::Clarifying { .. }), "state is {:?}", s.state);
    ensure!(reply.text.contains("Did you mean"), "reply was {:?}", reply.text);
    Ok(format!("apple orchard -> {FRUIT}; \"apple\" -> {}", reply.text))
}

struct Scale {
    index: ConceptIndex,
    build: Duration,
    records: usize,
}

fn scale_build() -> Result<Scale, String> {
    let res = support::resources();
    let portals = reference_portals();
    let records = synth_corpus(&portals, &res.linker.lexicon, 42);
    let started = Instant::now();
    let annotated: Vec<AnnotatedDataset> =
        records.into_par_iter().map(|r| annotate_dataset(r, &res.linker, &res.profiles)).collect();
    let records = annotated.len();
    let index = build_index(annotated).map_err(|e| e.to_string())?;
    Ok(Scale { index, build: started.elapsed(), records })
}

fn scale_benchmark(scale: &Scale) -> Outcome {
    let expected: usize = reference_portals().iter().map(|p| p.dataset_count_hint).sum();
    ensure!(expected == 18342 && scale.records == expected, "corpus has {} records", scale.records);
    ensure!(scale.build < Duration::from_secs(60), "annotate and build took {:?}", scale.build);

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("synth.odci");
    save_index(&scale.index, &path).map_err(|e| e.to_string())?;
    let started = Instant::now();
    let loaded = load_index(&path).map_err(|e| e.to_string())?;
    let load = started.elapsed();
    ensure!(load < Duration::from_secs(2), "load took {load:?}");
    ensure!(loaded == scale.index, "loaded index differs");

    let res = support::resources();
    let queries = synth_queries(&res.linker.lexicon, 1000, 7);
    let engine = SearchEngine::new(loaded, res.profiles, res.labels, Box::new(res.linker));
    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    let listener = rt.block_on(tokio::net::TcpListener::bind("127.0.0.1:0")).map_err(|e| e.to_string())?;
    let addr = listener.local_addr().map_err(|e| e.to_string())?;
    let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
    let server = rt.spawn(serve_on(AppState::new(engine, DEFAULT_TTL_MS), listener, async {
        let _ = stopped.await;
    }));

    let agent: ureq::Agent = ureq::Agent::config_builder().timeout_global(Some(Duration::from_secs(10))).build().into();
    let url = format!("http://{addr}/v1/search");
    let mut latencies = Vec::with_capacity(queries.len());
    let mut with_hits = 0;
    for q in &queries {
        let started = Instant::now();
        let mut resp = agent.post(&url).send_json(json!({ "text": q })).map_err(|e| format!("{q}: {e}"))?;
        let body: Value = resp.body_mut().read_json().map_err(|e| e.to_string())?;
        latencies.push(started.elapsed());
        if body["total_hits"].as_u64().unwrap_or(0) > 0 {
            with_hits += 1;
        }
    }
    let _ = stop.send(());
    rt.block_on(server).map_err(|e| e.to_string())?.map_err(|e| e.to_string())?;
    latencies.sort();
    let p95 = latencies[(latencies.len() * 95).div_ceil(100) - 1];
    ensure!(p95 < Duration::from_millis(50), "p95 {p95:?}");
    Ok(format!(
        "{} records, build {:.2?}, load {load:.2?}, {} queries ({with_hits} with hits) p95 {p95:.2?} max {:.2?}",
        scale.records,
        scale.build,
        queries.len(),
        latencies.last().unwrap()
    ))
}

fn pipeline_bytes(dir: &std::path::Path) -> Result<(Vec<u8>, ConceptIndex), String> {
    let res = support::resources();
    let spec = PortalSpec::new("data.europa.eu", "");
    let mut lines = Vec::new();
    harvest_portal(&spec, &Source::Offline(support::fixtures().join("ckan")), &HarvestOptions::default(), |r| lines.push(r), |_| {})
        .map_err(|e| e.to_string())?;
    let annotated: Vec<String> = lines.into_iter().map(|r| write_annotated(&annotate_dataset(r, &res.linker, &res.profiles))).collect();
    let datasets = annotated.iter().map(|l| parse_annotated(l)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let index = build_index(datasets).map_err(|e| e.to_string())?;
    let path = dir.join("run.odci");
    save_index(&index, &path).map_err(|e| e.to_string())?;
    let bytes = fs::read(&path).map_err(|e| e.to_string())?;
    Ok((bytes, load_index(&path).map_err(|e| e.to_string())?))
}

fn determinism() -> Outcome {
    let (d1, d2) = (tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?);
    let (a, loaded) = pipeline_bytes(d1.path())?;
    let (b, _) = pipeline_bytes(d2.path())?;
    ensure!(a == b, "index files differ ({} vs {} bytes)", a.len(), b.len());

    // Round trip: every single-concept and pair query agrees before and
    // after save/load, as do refinements and suggestions.
    let fresh = odsearch_core::index::read_index(&a).map_err(|e| e.to_string())?;
    ensure!(write_index(&fresh) == a, "rewrite differs");
    let vocab: Vec<ConceptId> = loaded.concepts().collect();
    let mut checked = 0;
    for (i, x) in vocab.iter().enumerate() {
        for y in &vocab[i..] {
            let q: BTreeSet<ConceptId> = [*x, *y].into_iter().collect();
            let (r1, r2) = (fresh.search_any(&q), loaded.search_any(&q));
            ensure!(r1 == r2, "results differ for {q:?}");
            let f: BTreeSet<ConceptId> = [*y].into_iter().collect();
            ensure!(fresh.refine(&r1, &f) == loaded.refine(&r2, &f), "refine differs for {q:?}");
            ensure!(fresh.top_cooccurring(&r1, 6) == loaded.top_cooccurring(&r2, 6), "suggestions differ for {q:?}");
            checked += 1;
        }
    }
    Ok(format!("{} identical bytes, {checked} queries preserved", a.len()))
}

fn dialogue_replay() -> Outcome {
    let engine = support::engine_for(support::mixed_records());
    let dir = support::fixtures().join("transcripts");
    let mut paths: Vec<_> = fs::read_dir(&dir).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
    paths.sort();
    let mut turns = 0;
    for path in &paths {
        let v: Value = serde_json::from_str(&fs::read_to_string(path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let mut s = DialogueSession::new(v["name"].as_str().unwrap_or_default(), 0);
        let recorded = v["turns"].as_array().ok_or("no turns")?;
        for (t, turn) in recorded.iter().enumerate() {
            let ev: Event = serde_json::from_value(turn["event"].clone()).map_err(|e| e.to_string())?;
            let reply = step(&mut s, &ev, &engine, 1000 * (t as u64 + 1)).map_err(|e| e.to_string())?;
            let want: BotReply = serde_json::from_value(turn["reply"].clone()).map_err(|e| e.to_string())?;
            ensure!(reply == want, "{} turn {t}: reply differs", path.display());
            turns += 1;
        }
        let last = recorded.last().ok_or("empty transcript")?;
        let want: DialogueSession = serde_json::from_value(last["session"].clone()).map_err(|e| e.to_string())?;
        ensure!(s == want, "{}: final state differs", path.display());
    }
    ensure!(paths.len() == 10, "found {} transcripts", paths.len());
    Ok(format!("{} transcripts, {turns} turns", paths.len()))
}

fn run(name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    match outcome {
        Ok(detail) => {
            println!("PASS  {name}: {detail}");
            true
        }
        Err(detail) => {
            println!("FAIL  {name}: {detail}");
            false
        }
    }
}

fn main() -> ExitCode {
    // Honor the libtest filter convention loosely: listing requests get an
    // empty list so `cargo test -- --list` works.
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let scale = scale_build();
    let mut ok = true;
    ok &= run("oracle equivalence", oracle_equivalence);
    ok &= run("ranking example", ranking_example);
    ok &= run("AND/OR semantics", || match &scale {
        Ok(s) => and_or_semantics(&s.index),
        Err(e) => Err(format!("synthetic corpus: {e}")),
    });
    ok &= run("cross-lingual retrieval", cross_lingual);
    ok &= run("language identification", language_id);
    ok &= run("disambiguation", disambiguation);
    ok &= run("scale benchmark", || match &scale {
        Ok(s) => scale_benchmark(s),
        Err(e) => Err(format!("synthetic corpus: {e}")),
    });
    ok &= run("determinism", determinism);
    ok &= run("dialogue replay", dialogue_replay);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
