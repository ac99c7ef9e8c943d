//! Rebuilds `resources/profiles/*.profile` from `resources/training/*.txt`.
//!
//! cargo run -p odsearch-core --example build_profiles

use std::fs;
use std::path::Path;

use odsearch_core::langid::build_profile;
use odsearch_core::LanguageTag;

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("resources");
    for lang in LanguageTag::KNOWN {
        let text = fs::read_to_string(root.join("training").join(format!("{lang}.txt"))).expect("training text");
        let profile = build_profile(&text, lang).expect("enough training text");
        let out = root.join("profiles").join(format!("{lang}.profile"));
        fs::write(&out, profile.to_file_string()).expect("write profile");
        println!("{} {} n-grams", out.display(), profile.ngrams().len());
    }
}
