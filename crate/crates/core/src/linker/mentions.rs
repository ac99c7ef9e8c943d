use super::{Candidate, Lexicon, Weight};
use crate::language::LanguageTag;

/// A matched token span with its candidate senses.
#[derive(Clone, Debug, PartialEq)]
pub struct Mention<W> {
    pub surface: String,
    /// Half-open token range.
    pub span: (usize, usize),
    pub candidates: Vec<Candidate<W>>,
}

/// Greedy left-to-right longest match. Spans never overlap and come out in
/// ascending order; tokens that start no match are skipped.
pub fn find_mentions<W: Weight>(tokens: &[String], language: LanguageTag, lexicon: &Lexicon<W>) -> Vec<Mention<W>> {
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < tokens.len() {
        let longest = lexicon.max_phrase_len().min(tokens.len() - i);
        for len in (1..=longest).rev() {
            let surface = tokens[i..i + len].join(" ");
            if let Some(candidates) = lexicon.candidates(&surface, language) {
                out.push(Mention { surface, span: (i, i + len), candidates });
                i += len;
                continue 'outer;
            }
        }
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linker::ConceptId;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn longest_match_wins() {
        let c = |n| ConceptId::new(n).unwrap();
        let lex = Lexicon::from_entries(vec![
            ("vienna", LanguageTag::En, c(1), 1.0),
            ("dog", LanguageTag::En, c(2), 1.0),
            ("hot dog", LanguageTag::En, c(3), 1.0),
        ])
        .unwrap();
        let m = find_mentions(&toks("hot dog in vienna"), LanguageTag::En, &lex);
        let got: Vec<_> = m.iter().map(|m| (m.surface.as_str(), m.span, m.candidates[0].concept)).collect();
        assert_eq!(got, vec![("hot dog", (0, 2), c(3)), ("vienna", (3, 4), c(1))]);
        assert!(find_mentions(&[], LanguageTag::En, &lex).is_empty());
        let m = find_mentions(&toks("dog"), LanguageTag::En, &lex);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].candidates[0].concept, c(2));
        assert!(find_mentions(&toks("dog"), LanguageTag::De, &lex).is_empty());
    }
}
