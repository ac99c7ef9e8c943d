//! Seeded synthetic corpora and query mixes for scale testing.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::harvest::PortalSpec;
use crate::language::LanguageTag;
use crate::linker::{normalize_tokens, Lexicon, Weight};
use crate::record::{dedup_keywords, DatasetRecord};
use crate::resources::training_text;

fn filler_words(lang: LanguageTag) -> Vec<String> {
    let mut words = normalize_tokens(training_text(lang).unwrap_or_default(), lang);
    words.retain(|w| w.chars().count() >= 3 && w.chars().all(char::is_alphabetic));
    words.sort_unstable();
    words.dedup();
    words
}

fn pick(n: usize, pool: &[&str], rng: &mut ChaCha8Rng) -> Vec<String> {
    (0..n).map(|_| pool.choose(rng).expect("non-empty pool").to_string()).collect()
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Generates `dataset_count_hint` records per portal, written in the
/// portal's expected language from lexicon surfaces and training-text
/// vocabulary. Records carry language `und`, as after harvesting.
pub fn synth_corpus<W: Weight>(portals: &[PortalSpec], lexicon: &Lexicon<W>, seed: u64) -> Vec<DatasetRecord> {
    let mut out = Vec::with_capacity(portals.iter().map(|p| p.dataset_count_hint).sum());
    for (pi, portal) in portals.iter().enumerate() {
        let lang = portal.expected_language;
        let surfaces = lexicon.surfaces(lang);
        let filler = filler_words(lang);
        if surfaces.is_empty() || filler.is_empty() {
            continue;
        }
        let filler_refs: Vec<&str> = filler.iter().map(String::as_str).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(pi as u64));
        for i in 0..portal.dataset_count_hint {
            let n_title = rng.random_range(1..=3);
            let mut title = pick(n_title, &surfaces, &mut rng);
            let n_fill = rng.random_range(1..=2);
            title.extend(pick(n_fill, &filler_refs, &mut rng));
            let n_desc = rng.random_range(12..=30);
            let description: Vec<String> = (0..n_desc)
                .map(|_| {
                    let pool = if rng.random_bool(0.2) { &surfaces } else { &filler_refs };
                    pool.choose(&mut rng).expect("non-empty pool").to_string()
                })
                .collect();
            let n_kw = rng.random_range(2..=4);
            let keywords = dedup_keywords(pick(n_kw, &surfaces, &mut rng));
            let dataset_id = format!("synth-{i:05}");
            out.push(DatasetRecord {
                portal_id: portal.portal_id.clone(),
                landing_url: format!("https://{}/dataset/{dataset_id}", portal.portal_id),
                dataset_id,
                title: capitalize(&title.join(" ")),
                description: capitalize(&description.join(" ")) + ".",
                keywords,
                language: LanguageTag::Und,
                publisher: String::new(),
            });
        }
    }
    out
}

/// Queries of one to three lexicon surfaces from a random language, with
/// every tenth query made of words the lexicon does not know.
pub fn synth_queries<W: Weight>(lexicon: &Lexicon<W>, n: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let by_lang: Vec<Vec<&str>> = LanguageTag::KNOWN.iter().map(|l| lexicon.surfaces(*l)).filter(|s| !s.is_empty()).collect();
    (0..n)
        .map(|i| {
            if i % 10 == 9 || by_lang.is_empty() {
                return format!("zzq{i} xqv");
            }
            let pool = by_lang.choose(&mut rng).expect("non-empty");
            let k = rng.random_range(1..=3);
            (0..k).map(|_| *pool.choose(&mut rng).expect("non-empty")).collect::<Vec<_>>().join(" ")
        })
        .collect()
}
