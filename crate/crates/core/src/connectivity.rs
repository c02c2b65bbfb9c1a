//! Exhaustive vertex-cut searches for classic, r-component, g-good neighbour
//! and g-good r-component connectivity.
//!
//! "Each surviving vertex has at least `g` neighbours" is read inside `G - F`:
//! a vertex's residual degree counts only neighbours that were not deleted.
//! This is the reading the extremal constructions rely on, and it is the
//! choice that changes results the most.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

/// Largest order accepted by [`min_cut`].
pub const MAX_SEARCH_ORDER: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConnectivityError {
    #[error("exhaustive cut search is limited to order {MAX_SEARCH_ORDER}, got {0}")]
    TooLarge(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("component threshold r must be at least 2, got {0}")]
    BadComponentCount(usize),
}

/// Which connectivity a cut is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutMode {
    /// `κ`: `G - F` disconnected or a single vertex.
    Classic,
    /// `cκ_r`: at least `r` components, or fewer than `r` vertices left.
    Component,
    /// `κ_g`: disconnected, every survivor keeps `g` neighbours.
    Neighbor,
    /// `cκ_{g,r}`: at least `r` components, every survivor keeps `g` neighbours.
    Full,
}

impl fmt::Display for CutMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutMode::Classic => "classic",
            CutMode::Component => "component",
            CutMode::Neighbor => "neighbor",
            CutMode::Full => "full",
        })
    }
}

impl FromStr for CutMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "classic" => Ok(CutMode::Classic),
            "component" => Ok(CutMode::Component),
            "neighbor" | "neighbour" => Ok(CutMode::Neighbor),
            "full" => Ok(CutMode::Full),
            other => Err(format!("unknown cut mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CutQuery {
    pub g: usize,
    pub r: usize,
    pub mode: CutMode,
}

impl CutQuery {
    pub fn classic() -> Self {
        CutQuery { g: 0, r: 2, mode: CutMode::Classic }
    }

    pub fn component(r: usize) -> Self {
        CutQuery { g: 0, r, mode: CutMode::Component }
    }

    pub fn neighbor(g: usize) -> Self {
        CutQuery { g, r: 2, mode: CutMode::Neighbor }
    }

    pub fn full(g: usize, r: usize) -> Self {
        CutQuery { g, r, mode: CutMode::Full }
    }

    fn validate(&self) -> Result<(), ConnectivityError> {
        if self.r < 2 {
            return Err(ConnectivityError::BadComponentCount(self.r));
        }
        Ok(())
    }

    fn components_needed(&self) -> usize {
        match self.mode {
            CutMode::Classic | CutMode::Neighbor => 2,
            CutMode::Component | CutMode::Full => self.r,
        }
    }

    fn needs_good_neighbors(&self) -> bool {
        matches!(self.mode, CutMode::Neighbor | CutMode::Full) && self.g > 0
    }
}

/// Evidence that a vertex set is a valid cut.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutCertificate {
    pub removed: VertexSet,
    /// Sizes of the components of `G - F`, largest first.
    pub component_sizes: Vec<usize>,
    /// Least degree inside `G - F`; `None` when nothing survives.
    pub min_residual_degree: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimumCut {
    pub value: usize,
    pub certificate: CutCertificate,
}

fn min_residual_degree(g: &Graph, survivors: VertexSet) -> Option<usize> {
    survivors
        .iter()
        .map(|v| g.neighbors(v).intersection(survivors).len())
        .min()
}

/// Check one vertex set against a query, returning a certificate when it
/// qualifies. Sets reaching outside `V(G)` never qualify.
pub fn is_valid_cut(g: &Graph, removed: VertexSet, q: CutQuery) -> Option<CutCertificate> {
    if !removed.is_subset(g.vertices()) || q.r < 2 {
        return None;
    }
    let survivors = g.vertices().difference(removed);
    let left = survivors.len();
    let small_enough = match q.mode {
        CutMode::Classic => left == 1,
        CutMode::Component => left < q.r,
        CutMode::Neighbor | CutMode::Full => false,
    };
    if !small_enough {
        if left == 0 {
            return None;
        }
        if q.needs_good_neighbors() && min_residual_degree(g, survivors).unwrap_or(0) < q.g {
            return None;
        }
        if g.count_components(removed, q.components_needed()) < q.components_needed() {
            return None;
        }
    }
    Some(certificate(g, removed))
}

fn certificate(g: &Graph, removed: VertexSet) -> CutCertificate {
    let survivors = g.vertices().difference(removed);
    let mut component_sizes: Vec<usize> = g.components(removed).iter().map(|c| c.len()).collect();
    component_sizes.sort_unstable_by(|a, b| b.cmp(a));
    CutCertificate {
        removed,
        component_sizes,
        min_residual_degree: min_residual_degree(g, survivors),
    }
}

/// Next integer with the same popcount (Gosper's hack).
fn next_same_popcount(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

/// Minimum valid cut by exhaustive search over subsets of increasing size.
///
/// Within one size, subsets are visited in colex order (increasing bitmask),
/// so the certificate is the colex-least minimiser. `Ok(None)` means no
/// subset qualifies, e.g. complete graphs under `Neighbor`/`Full`.
pub fn min_cut(g: &Graph, q: CutQuery) -> Result<Option<MinimumCut>, ConnectivityError> {
    q.validate()?;
    let n = g.order();
    if n > MAX_SEARCH_ORDER {
        return Err(ConnectivityError::TooLarge(n));
    }
    if !g.is_connected() {
        return Err(ConnectivityError::Disconnected);
    }
    let limit = 1u64 << n;
    for size in 0..=n {
        let mut mask = if size == 0 { 0 } else { (1u64 << size) - 1 };
        while mask < limit {
            let removed = VertexSet::from_bits(mask);
            if let Some(certificate) = is_valid_cut(g, removed, q) {
                return Ok(Some(MinimumCut { value: size, certificate }));
            }
            if mask == 0 {
                break;
            }
            mask = next_same_popcount(mask);
        }
    }
    Ok(None)
}

/// Just the value of [`min_cut`].
pub fn connectivity(g: &Graph, q: CutQuery) -> Result<Option<usize>, ConnectivityError> {
    Ok(min_cut(g, q)?.map(|c| c.value))
}

/// `κ(G)`.
pub fn vertex_connectivity(g: &Graph) -> Result<usize, ConnectivityError> {
    Ok(connectivity(g, CutQuery::classic())?.expect("n - 1 deletions always leave one vertex"))
}

/// `λ(G)`: minimum over `t` of the unit-capacity max flow from vertex 0 to `t`.
pub fn edge_connectivity(g: &Graph) -> usize {
    let n = g.order();
    (1..n).map(|t| max_flow(g, 0, t)).min().unwrap_or(0)
}

/// Unit-capacity undirected max flow by BFS augmentation.
fn max_flow(g: &Graph, s: usize, t: usize) -> usize {
    let n = g.order();
    // residual[u][v] for every ordered adjacent pair
    let mut residual = vec![vec![0i32; n]; n];
    for (u, v) in g.edges() {
        residual[u][v] = 1;
        residual[v][u] = 1;
    }
    let mut flow = 0;
    loop {
        let mut parent = vec![usize::MAX; n];
        parent[s] = s;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for v in 0..n {
                if residual[u][v] > 0 && parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[t] == usize::MAX {
            return flow;
        }
        let mut v = t;
        while v != s {
            let u = parent[v];
            residual[u][v] -= 1;
            residual[v][u] += 1;
            v = u;
        }
        flow += 1;
    }
}
