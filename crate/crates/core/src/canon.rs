//! Canonical labelling by partition refinement and backtracking.
//!
//! The search tree individualises one vertex of the first non-singleton cell
//! at each level and refines to an equitable partition. Every leaf is a
//! relabelling of the graph; the canonical one is the leaf whose adjacency
//! rows compare greatest. Siblings that are twins (`N(a) - b == N(b) - a`)
//! are swapped by an automorphism fixing the path so far, and only one of
//! them is expanded.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::graph6;

/// Largest order accepted by [`canonical_form`] and [`is_isomorphic`].
pub const MAX_CANONICAL_ORDER: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonError {
    #[error("canonical labelling is limited to order {MAX_CANONICAL_ORDER}, got {0}")]
    TooLarge(usize),
}

/// graph6 string of the canonically relabelled graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalForm(String);

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm, CanonError> {
    Ok(CanonicalForm(graph6::encode(&canonical_graph(g)?)))
}

/// The canonical relabelling itself.
pub fn canonical_graph(g: &Graph) -> Result<Graph, CanonError> {
    let perm = canonical_labeling(g)?;
    Ok(g.permute_unchecked(&perm))
}

/// Permutation sending each vertex to its canonical position.
pub fn canonical_labeling(g: &Graph) -> Result<Vec<usize>, CanonError> {
    if g.order() > MAX_CANONICAL_ORDER {
        return Err(CanonError::TooLarge(g.order()));
    }
    Ok(search_labeling(g))
}

/// `false` for graphs of different order; an error only if either is too large.
pub fn is_isomorphic(a: &Graph, b: &Graph) -> Result<bool, CanonError> {
    for g in [a, b] {
        if g.order() > MAX_CANONICAL_ORDER {
            return Err(CanonError::TooLarge(g.order()));
        }
    }
    if a.order() != b.order() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    let mut da = a.degree_profile().degrees;
    let mut db = b.degree_profile().degrees;
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return Ok(false);
    }
    Ok(canonical_graph(a)? == canonical_graph(b)?)
}

type Partition = Vec<Vec<usize>>;

struct Search<'a> {
    g: &'a Graph,
    best_rows: Option<Vec<u64>>,
    best_perm: Vec<usize>,
}

pub(crate) fn search_labeling(g: &Graph) -> Vec<usize> {
    let initial = refine(g, vec![(0..g.order()).collect()]);
    let mut search = Search { g, best_rows: None, best_perm: Vec::new() };
    search.descend(initial);
    search.best_perm
}

impl Search<'_> {
    fn descend(&mut self, cells: Partition) {
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            self.leaf(&cells);
            return;
        };
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cells[target] {
            if tried.iter().any(|&w| self.twins(v, w)) {
                continue;
            }
            tried.push(v);
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend(cells[..target].iter().cloned());
            next.push(vec![v]);
            next.push(cells[target].iter().copied().filter(|&w| w != v).collect());
            next.extend(cells[target + 1..].iter().cloned());
            let refined = refine(self.g, next);
            self.descend(refined);
        }
    }

    fn twins(&self, a: usize, b: usize) -> bool {
        self.g.neighbors(a).without(b) == self.g.neighbors(b).without(a)
    }

    fn leaf(&mut self, cells: &Partition) {
        let mut perm = vec![0; self.g.order()];
        for (pos, cell) in cells.iter().enumerate() {
            perm[cell[0]] = pos;
        }
        let rows = self.g.permute_unchecked(&perm).rows().to_vec();
        if self.best_rows.as_ref().is_none_or(|best| rows > *best) {
            self.best_rows = Some(rows);
            self.best_perm = perm;
        }
    }
}

/// Coarsest equitable refinement of an ordered partition. The order of the
/// new cells depends only on neighbour counts, never on vertex labels.
fn refine(g: &Graph, mut cells: Partition) -> Partition {
    loop {
        let masks: Vec<VertexSet> = cells.iter().map(|c| c.iter().copied().collect()).collect();
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<usize>, usize)> = cell
                .iter()
                .map(|&v| {
                    let nbrs = g.neighbors(v);
                    (masks.iter().map(|m| nbrs.intersection(*m).len()).collect(), v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}
