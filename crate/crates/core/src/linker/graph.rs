use std::collections::HashMap;

use super::{ConceptId, Weight};

/// Undirected weighted relatedness edges between concepts.
#[derive(Clone, Debug, Default)]
pub struct ConceptGraph<W> {
    adjacency: HashMap<ConceptId, HashMap<ConceptId, W>>,
    edge_count: usize,
}

impl<W: Weight> ConceptGraph<W> {
    pub fn new() -> Self {
        ConceptGraph { adjacency: HashMap::new(), edge_count: 0 }
    }

    pub fn from_edges<I>(edges: I) -> Result<Self, super::LexiconError>
    where
        I: IntoIterator<Item = (ConceptId, ConceptId, W)>,
    {
        let mut g = Self::new();
        for (a, b, w) in edges {
            g.add_edge(a, b, w)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: ConceptId, b: ConceptId, w: W) -> Result<(), super::LexiconError> {
        use super::LexiconError::Invalid;
        if a == b {
            return Err(Invalid(format!("self-loop on {a}")));
        }
        if !(w > W::zero() && w <= W::one()) {
            return Err(Invalid(format!("edge {a} {b} has weight {w} outside (0,1]")));
        }
        if self.weight(a, b).is_some() {
            return Err(Invalid(format!("duplicate edge {a} {b}")));
        }
        self.adjacency.entry(a).or_default().insert(b, w);
        self.adjacency.entry(b).or_default().insert(a, w);
        self.edge_count += 1;
        Ok(())
    }

    /// Parses the TSV format `concept_id\tconcept_id\tweight`.
    pub fn parse_tsv(text: &str) -> Result<Self, super::LexiconError> {
        let mut g = Self::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let err = |message: String| super::LexiconError::Format { line: i + 1, message };
            let cols: Vec<&str> = line.split('\t').collect();
            let [a, b, w] = cols[..] else {
                return Err(err(format!("expected 3 columns, found {}", cols.len())));
            };
            let a: ConceptId = a.parse().map_err(|e| err(format!("{e}")))?;
            let b: ConceptId = b.parse().map_err(|e| err(format!("{e}")))?;
            let w: f64 = w.parse().map_err(|_| err(format!("bad weight {w:?}")))?;
            let w = W::from_f64(w).ok_or_else(|| err(format!("bad weight {w}")))?;
            g.add_edge(a, b, w).map_err(|e| err(e.to_string()))?;
        }
        Ok(g)
    }

    pub fn weight(&self, a: ConceptId, b: ConceptId) -> Option<W> {
        self.adjacency.get(&a)?.get(&b).copied()
    }

    pub fn neighbors(&self, a: ConceptId) -> impl Iterator<Item = (ConceptId, W)> + '_ {
        self.adjacency.get(&a).into_iter().flatten().map(|(b, w)| (*b, *w))
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Drops a concept and all its edges.
    pub fn remove_concept(&mut self, a: ConceptId) {
        if let Some(nbrs) = self.adjacency.remove(&a) {
            for b in nbrs.keys() {
                if let Some(m) = self.adjacency.get_mut(b) {
                    m.remove(&a);
                }
            }
            self.edge_count -= nbrs.len();
        }
    }
}
