mod support;

use proptest::prelude::*;

use odsearch_core::langid::{build_profile, detect_language, ranked_ngrams, LanguageProfile};
use odsearch_core::resources::{bundled_profile_text, bundled_profiles, training_text};
use odsearch_core::LanguageTag;

#[test]
fn committed_profiles_match_training_texts() {
    for lang in LanguageTag::KNOWN {
        let built = build_profile(training_text(lang).unwrap(), lang).unwrap();
        assert_eq!(built.to_file_string(), bundled_profile_text(lang).unwrap(), "{lang} profile is stale");
        assert_eq!(built.ngrams().len(), 300);
    }
}

#[test]
fn german_profile_contains_de_trigram_in_top_20() {
    let p = build_profile(training_text(LanguageTag::De).unwrap(), LanguageTag::De).unwrap();
    assert!(p.ngrams()[..20].iter().any(|g| g == " de"));
}

#[test]
fn identical_text_gives_identical_profile() {
    let t = training_text(LanguageTag::Fi).unwrap();
    assert_eq!(build_profile(t, LanguageTag::Fi).unwrap(), build_profile(t, LanguageTag::Fi).unwrap());
}

#[test]
fn labelled_sentences_match_frozen_predictions() {
    let profiles = bundled_profiles().unwrap();
    let expected = support::read_fixture("langid_expected.tsv");
    let mut correct = 0;
    let mut n = 0;
    for line in expected.lines() {
        let cols: Vec<&str> = line.split('\t').collect();
        let [gold, want, conf, sentence] = cols[..] else { panic!("bad fixture line {line:?}") };
        let (got, c) = detect_language(sentence, &profiles);
        assert_eq!(got.code(), want, "{sentence}");
        let conf: f64 = conf.parse().unwrap();
        assert!((c - conf).abs() < 1e-6, "{sentence}: {c} vs {conf}");
        correct += usize::from(got.code() == gold);
        n += 1;
    }
    assert_eq!(n, 70);
    assert!(correct >= 63, "{correct}/70");
}

#[test]
fn self_identification() {
    let profiles = bundled_profiles().unwrap();
    for lang in LanguageTag::KNOWN {
        assert_eq!(detect_language(training_text(lang).unwrap(), &profiles).0, lang);
    }
}

#[test]
fn german_function_words() {
    let (lang, conf) = detect_language("der die das und oder aber", &bundled_profiles().unwrap());
    assert_eq!(lang, LanguageTag::De);
    assert!(conf > 0.3, "{conf}");
}

#[test]
fn too_few_ngrams_is_und() {
    let profiles = bundled_profiles().unwrap();
    assert_eq!(detect_language("", &profiles), (LanguageTag::Und, 0.0));
    assert_eq!(detect_language("12 — 34", &profiles), (LanguageTag::Und, 0.0));
    // " a " has the distinct n-grams " ", "a", " a", "a " and " a ".
    assert_eq!(ranked_ngrams("a").len(), 5);
}

#[test]
fn profile_files_parse() {
    for lang in LanguageTag::KNOWN {
        let p = LanguageProfile::parse_file(bundled_profile_text(lang).unwrap()).unwrap();
        assert_eq!(p.language(), lang);
    }
}

fn sample_text() -> impl Strategy<Value = String> {
    let sentences: Vec<String> = support::read_fixture("langid_sentences.tsv")
        .lines()
        .map(|l| l.split_once('\t').unwrap().1.to_string())
        .collect();
    prop_oneof![
        proptest::sample::select(sentences),
        "\\PC{0,60}",
        "[a-zäöü ]{0,40}",
    ]
}

proptest! {
    #[test]
    fn permutation_invariant_and_bounded(text in sample_text(), seed in any::<u64>()) {
        let profiles = bundled_profiles().unwrap();
        let (lang, conf) = detect_language(&text, &profiles);
        prop_assert!((0.0..=1.0).contains(&conf));
        if lang.is_und() {
            prop_assert_eq!(conf, 0.0);
        }
        let mut shuffled = profiles.clone();
        let n = shuffled.len();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(detect_language(&text, &shuffled), (lang, conf));
    }
}
