use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use super::{weight, ConceptGraph, ConceptId, Mention, Weight};

pub const PRIOR_WEIGHT: f64 = 0.3;
pub const DEGREE_WEIGHT: f64 = 0.7;
pub const AMBIGUITY_RATIO: f64 = 0.8;

/// Outcome of disambiguation. Mentions are in ascending span order.
#[derive(Clone, Debug, PartialEq)]
pub struct Annotation<W> {
    pub concepts: BTreeSet<ConceptId>,
    pub mentions: Vec<(Mention<W>, ConceptId)>,
    /// Unresolved mentions, each carrying the two senses left in the tie.
    pub ambiguous: Vec<Mention<W>>,
}

impl<W> Default for Annotation<W> {
    fn default() -> Self {
        Annotation { concepts: BTreeSet::new(), mentions: Vec::new(), ambiguous: Vec::new() }
    }
}

struct Node<W> {
    mention: usize,
    concept: ConceptId,
    prior: W,
    alive: bool,
}

struct FinalStep<W> {
    removed: usize,
    survivor: usize,
    removed_score: W,
    survivor_score: W,
}

/// Iterative candidate pruning over the candidate graph.
///
/// Each round removes, among the mentions holding the most live candidates,
/// the candidate with the lowest `0.3·prior + 0.7·degree/max_degree`; ties
/// remove the greater concept id (then the later span) first. A mention whose
/// last pruning step was a near tie (ratio ≥ 0.8) between two candidates with
/// no edges at all is reported as ambiguous instead of resolved.
pub fn disambiguate<W: Weight>(mentions: &[Mention<W>], graph: &ConceptGraph<W>) -> Annotation<W> {
    let mut mentions: Vec<&Mention<W>> = mentions.iter().collect();
    mentions.sort_by(|a, b| a.span.cmp(&b.span).then_with(|| a.surface.cmp(&b.surface)));

    let mut nodes: Vec<Node<W>> = Vec::new();
    let mut by_concept: HashMap<ConceptId, Vec<usize>> = HashMap::new();
    for (m, mention) in mentions.iter().enumerate() {
        for c in &mention.candidates {
            by_concept.entry(c.concept).or_default().push(nodes.len());
            nodes.push(Node { mention: m, concept: c.concept, prior: c.prior, alive: true });
        }
    }
    let mut adjacency: Vec<Vec<(usize, W)>> = vec![Vec::new(); nodes.len()];
    for (i, node) in nodes.iter().enumerate() {
        for (nbr, w) in graph.neighbors(node.concept) {
            for &j in by_concept.get(&nbr).into_iter().flatten() {
                if nodes[j].mention != node.mention {
                    adjacency[i].push((j, w));
                }
            }
        }
        adjacency[i].sort_by_key(|&(j, _)| j);
    }
    let degrees = |nodes: &[Node<W>]| -> Vec<W> {
        adjacency
            .iter()
            .enumerate()
            .map(|(i, adj)| {
                if !nodes[i].alive {
                    return W::zero();
                }
                adj.iter().filter(|(j, _)| nodes[*j].alive).fold(W::zero(), |acc, (_, w)| acc + *w)
            })
            .collect()
    };
    let initial_degree = degrees(&nodes);

    let mut alive_count: Vec<usize> = mentions.iter().map(|m| m.candidates.len()).collect();
    let mut final_step: Vec<Option<FinalStep<W>>> = mentions.iter().map(|_| None).collect();
    let prior_w: W = weight(PRIOR_WEIGHT);
    let degree_w: W = weight(DEGREE_WEIGHT);

    loop {
        let most = alive_count.iter().copied().max().unwrap_or(0);
        if most <= 1 {
            break;
        }
        let deg = degrees(&nodes);
        let max_deg = nodes
            .iter()
            .zip(&deg)
            .filter(|(n, _)| n.alive)
            .fold(W::zero(), |acc, (_, d)| acc.max(*d));
        let score = |i: usize| {
            let rel = if max_deg > W::zero() { deg[i] / max_deg } else { W::zero() };
            prior_w * nodes[i].prior + degree_w * rel
        };
        let victim = (0..nodes.len())
            .filter(|&i| nodes[i].alive && alive_count[nodes[i].mention] == most)
            .min_by(|&a, &b| {
                score(a)
                    .partial_cmp(&score(b))
                    .unwrap_or(Ordering::Equal)
                    .then_with(|| nodes[b].concept.cmp(&nodes[a].concept))
                    .then_with(|| mentions[nodes[b].mention].span.cmp(&mentions[nodes[a].mention].span))
            })
            .expect("a mention with several live candidates exists");
        let m = nodes[victim].mention;
        if alive_count[m] == 2 {
            let survivor = (0..nodes.len())
                .find(|&i| i != victim && nodes[i].alive && nodes[i].mention == m)
                .expect("two live candidates");
            final_step[m] = Some(FinalStep {
                removed: victim,
                survivor,
                removed_score: score(victim),
                survivor_score: score(survivor),
            });
        }
        nodes[victim].alive = false;
        alive_count[m] -= 1;
    }

    let ratio_threshold: W = weight(AMBIGUITY_RATIO);
    let mut out = Annotation::default();
    for (m, mention) in mentions.iter().enumerate() {
        if let Some(step) = &final_step[m] {
            let ratio = if step.survivor_score > W::zero() {
                step.removed_score / step.survivor_score
            } else {
                W::one()
            };
            let isolated = initial_degree[step.removed] == W::zero() && initial_degree[step.survivor] == W::zero();
            if ratio >= ratio_threshold && isolated {
                let keep = [nodes[step.removed].concept, nodes[step.survivor].concept];
                let mut tied = (*mention).clone();
                tied.candidates.retain(|c| keep.contains(&c.concept));
                out.ambiguous.push(tied);
                continue;
            }
        }
        let chosen = nodes
            .iter()
            .find(|n| n.alive && n.mention == m)
            .map(|n| n.concept)
            .expect("every mention keeps one candidate");
        out.concepts.insert(chosen);
        out.mentions.push(((*mention).clone(), chosen));
    }
    out
}
