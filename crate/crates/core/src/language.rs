use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// ISO 639-1 code of one of the supported portal languages, or `Und`.
///
/// Variant order follows the codes alphabetically, so `Ord` agrees with
/// comparing the code strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LanguageTag {
    De,
    En,
    Es,
    Fi,
    Fr,
    It,
    Pt,
    #[default]
    Und,
}

impl LanguageTag {
    /// Every determined language, in code order.
    pub const KNOWN: [LanguageTag; 7] = [
        LanguageTag::De,
        LanguageTag::En,
        LanguageTag::Es,
        LanguageTag::Fi,
        LanguageTag::Fr,
        LanguageTag::It,
        LanguageTag::Pt,
    ];

    pub fn code(self) -> &'static str {
        match self {
            LanguageTag::De => "de",
            LanguageTag::En => "en",
            LanguageTag::Es => "es",
            LanguageTag::Fi => "fi",
            LanguageTag::Fr => "fr",
            LanguageTag::It => "it",
            LanguageTag::Pt => "pt",
            LanguageTag::Und => "und",
        }
    }

    pub fn is_und(self) -> bool {
        self == LanguageTag::Und
    }
}

impl fmt::Display for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown language code {0:?}")]
pub struct UnknownLanguage(pub String);

impl FromStr for LanguageTag {
    type Err = UnknownLanguage;

    /// Accepts the lowercase codes plus "sp" as an alias for Spanish.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "de" => LanguageTag::De,
            "en" => LanguageTag::En,
            "es" | "sp" => LanguageTag::Es,
            "fi" => LanguageTag::Fi,
            "fr" => LanguageTag::Fr,
            "it" => LanguageTag::It,
            "pt" => LanguageTag::Pt,
            "und" => LanguageTag::Und,
            _ => return Err(UnknownLanguage(s.to_string())),
        })
    }
}
