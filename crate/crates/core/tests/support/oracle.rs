//! Straightforward reference implementations, written independently of the
//! library code they check.

use std::collections::{BTreeMap, BTreeSet};

use odsearch_core::linker::{Candidate, ConceptGraph, Mention};
use odsearch_core::ConceptId;

/// Linear scan: score every dataset, keep positive scores, sort by the
/// ranking rule.
pub fn search_any(corpus: &[Vec<ConceptId>], query: &BTreeSet<ConceptId>) -> Vec<(u32, u32)> {
    let mut hits = Vec::new();
    for (o, concepts) in corpus.iter().enumerate() {
        let mut score = 0;
        for q in query {
            if concepts.contains(q) {
                score += 1;
            }
        }
        if score > 0 {
            hits.push((o as u32, score));
        }
    }
    hits.sort_by(|a, b| {
        let (sa, sb) = (a.1, b.1);
        if sa != sb {
            return sb.cmp(&sa);
        }
        let (na, nb) = (distinct(&corpus[a.0 as usize]), distinct(&corpus[b.0 as usize]));
        if na != nb {
            return nb.cmp(&na);
        }
        a.0.cmp(&b.0)
    });
    hits
}

fn distinct(concepts: &[ConceptId]) -> usize {
    concepts.iter().collect::<BTreeSet<_>>().len()
}

pub fn refine(corpus: &[Vec<ConceptId>], hits: &[(u32, u32)], selected: &BTreeSet<ConceptId>) -> Vec<(u32, u32)> {
    hits.iter().filter(|(o, _)| selected.iter().all(|s| corpus[*o as usize].contains(s))).copied().collect()
}

pub fn top_cooccurring(
    corpus: &[Vec<ConceptId>],
    hits: &[(u32, u32)],
    excluded: &BTreeSet<ConceptId>,
    k: usize,
) -> Vec<(ConceptId, usize)> {
    let mut counts: BTreeMap<ConceptId, usize> = BTreeMap::new();
    for (o, _) in hits {
        for c in corpus[*o as usize].iter().collect::<BTreeSet<_>>() {
            if !excluded.contains(c) {
                *counts.entry(*c).or_default() += 1;
            }
        }
    }
    let mut all: Vec<(ConceptId, usize)> = counts.into_iter().collect();
    // Stable sort on count keeps ascending ids within equal counts.
    all.sort_by_key(|a| std::cmp::Reverse(a.1));
    all.into_iter().take(k).collect()
}

/// Greedy longest match written recursively over a plain phrase set.
pub fn longest_match(tokens: &[String], phrases: &BTreeSet<String>, max_len: usize) -> Vec<(usize, usize)> {
    fn go(tokens: &[String], at: usize, phrases: &BTreeSet<String>, max_len: usize, out: &mut Vec<(usize, usize)>) {
        if at >= tokens.len() {
            return;
        }
        let mut best = None;
        for end in at + 1..=tokens.len().min(at + max_len) {
            if phrases.contains(&tokens[at..end].join(" ")) {
                best = Some(end);
            }
        }
        match best {
            Some(end) => {
                out.push((at, end));
                go(tokens, end, phrases, max_len, out)
            }
            None => go(tokens, at + 1, phrases, max_len, out),
        }
    }
    let mut out = Vec::new();
    go(tokens, 0, phrases, max_len, &mut out);
    out
}

/// Every way to cover `tokens` with non-overlapping matched spans (gaps
/// allowed), for characterizing the greedy choice.
pub fn all_segmentations(tokens: &[String], phrases: &BTreeSet<String>, max_len: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(
        tokens: &[String],
        at: usize,
        phrases: &BTreeSet<String>,
        max_len: usize,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if at >= tokens.len() {
            out.push(cur.clone());
            return;
        }
        go(tokens, at + 1, phrases, max_len, cur, out);
        for end in at + 1..=tokens.len().min(at + max_len) {
            if phrases.contains(&tokens[at..end].join(" ")) {
                cur.push((at, end));
                go(tokens, end, phrases, max_len, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(tokens, 0, phrases, max_len, &mut Vec::new(), &mut out);
    out
}

/// Reference pruning: rescans every candidate pair each round.
/// Returns (chosen per mention in input order or None when ambiguous,
/// the tied pair for ambiguous mentions).
pub fn disambiguate(
    mentions: &[Mention<f64>],
    graph: &ConceptGraph<f64>,
) -> Vec<Result<ConceptId, (ConceptId, ConceptId)>> {
    let mut alive: Vec<Vec<Candidate<f64>>> = mentions.iter().map(|m| m.candidates.clone()).collect();
    let degree = |alive: &[Vec<Candidate<f64>>], mi: usize, c: ConceptId| -> f64 {
        let mut d = 0.0;
        for (mj, cands) in alive.iter().enumerate() {
            if mj == mi {
                continue;
            }
            for other in cands {
                if let Some(w) = graph.weight(c, other.concept) {
                    d += w;
                }
            }
        }
        d
    };
    let initial: Vec<Vec<f64>> = mentions
        .iter()
        .enumerate()
        .map(|(mi, m)| m.candidates.iter().map(|c| degree(&alive, mi, c.concept)).collect())
        .collect();
    let mut last: Vec<Option<(ConceptId, f64, ConceptId, f64)>> = vec![None; mentions.len()];
    loop {
        let most = alive.iter().map(Vec::len).max().unwrap_or(0);
        if most <= 1 {
            break;
        }
        let mut max_deg: f64 = 0.0;
        for (mi, cands) in alive.iter().enumerate() {
            for c in cands {
                max_deg = max_deg.max(degree(&alive, mi, c.concept));
            }
        }
        let score = |mi: usize, c: &Candidate<f64>| {
            let rel = if max_deg > 0.0 { degree(&alive, mi, c.concept) / max_deg } else { 0.0 };
            0.3 * c.prior + 0.7 * rel
        };
        let mut victim: Option<(usize, usize, f64)> = None;
        for (mi, cands) in alive.iter().enumerate() {
            if cands.len() != most {
                continue;
            }
            for (ci, c) in cands.iter().enumerate() {
                let s = score(mi, c);
                let better = match victim {
                    None => true,
                    Some((vm, vc, vs)) => {
                        let vcon = alive[vm][vc].concept;
                        s < vs
                            || (s == vs && c.concept > vcon)
                            || (s == vs && c.concept == vcon && mentions[mi].span > mentions[vm].span)
                    }
                };
                if better {
                    victim = Some((mi, ci, s));
                }
            }
        }
        let (vm, vc, vs) = victim.expect("some mention has several candidates");
        if alive[vm].len() == 2 {
            let other = alive[vm][1 - vc];
            last[vm] = Some((alive[vm][vc].concept, vs, other.concept, score(vm, &other)));
        }
        alive[vm].remove(vc);
    }
    mentions
        .iter()
        .enumerate()
        .map(|(mi, m)| {
            if let Some((removed, rs, kept, ks)) = last[mi] {
                let ratio = if ks > 0.0 { rs / ks } else { 1.0 };
                let deg0 = |c: ConceptId| {
                    let i = m.candidates.iter().position(|x| x.concept == c).expect("candidate");
                    initial[mi][i]
                };
                if ratio >= 0.8 && deg0(removed) == 0.0 && deg0(kept) == 0.0 {
                    let (a, b) = if removed < kept { (removed, kept) } else { (kept, removed) };
                    return Err((a, b));
                }
            }
            Ok(alive[mi][0].concept)
        })
        .collect()
}
