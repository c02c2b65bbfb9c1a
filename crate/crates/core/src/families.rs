//! Extremal graph families for given minimum degree and g-good r-component
//! (or g-good neighbour) connectivity.
//!
//! Vertex labelling is fixed: the distinguished low-degree vertex `u` is 0
//! (when the family has one), then the join core, then the big clique, then
//! the small cliques in order. Pendant edges from `u` always go to the
//! lowest-labelled vertices of their target part.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("{family} is infeasible for n={n}, k={k}, delta={delta}, g={g}, r={r}: {constraint}")]
    Infeasible {
        family: FamilyId,
        n: usize,
        k: usize,
        delta: usize,
        g: usize,
        r: usize,
        constraint: &'static str,
    },
    #[error("no case covers k={k}, delta={delta}, g={g}")]
    Uncovered { k: usize, delta: usize, g: usize },
    #[error("cases {0:?} overlap")]
    Overlap(Vec<ExtremalCase>),
    #[error("order n={n} is below the hypothesis bound {bound}")]
    BelowHypothesis { n: usize, bound: usize },
    #[error("unknown family id `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The five extremal constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyId {
    /// `u` joined to `δ` vertices of `K_{k-1}`, itself joined to
    /// `K_{n-(r-1)(g+1)-k} ∪ (r-1)K_{g+1}`.
    #[serde(rename = "delta0")]
    Delta0,
    /// `u` joined to `δ-g` vertices of `K_k` and all of a `K_g`; `K_k` joined
    /// to `K_{n-(r-1)(g+1)-k} ∪ (r-2)K_{g+1} ∪ K_g`.
    #[serde(rename = "deltamg-g")]
    DeltaMinusG,
    /// `u` joined to all of `K_{k-1}` and `δ-k+1` vertices of the big clique.
    #[serde(rename = "km1")]
    KMinusOne,
    /// `k = 1`: `u` joined to `δ-r+1` vertices of `K_{n-(r-1)(g+1)-1}` and one
    /// vertex of each `K_{g+1}`.
    #[serde(rename = "zero-delta")]
    ZeroDelta,
    /// `K_k ∨ (K_{n-k-(δ-k+1)(r-1)} ∪ (r-1)K_{δ-k+1})`.
    #[serde(rename = "join-vi")]
    CliqueJoin,
}

impl FamilyId {
    pub const ALL: [FamilyId; 5] = [
        FamilyId::Delta0,
        FamilyId::DeltaMinusG,
        FamilyId::KMinusOne,
        FamilyId::ZeroDelta,
        FamilyId::CliqueJoin,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::Delta0 => "delta0",
            FamilyId::DeltaMinusG => "deltamg-g",
            FamilyId::KMinusOne => "km1",
            FamilyId::ZeroDelta => "zero-delta",
            FamilyId::CliqueJoin => "join-vi",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, FamilyError> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| FamilyError::UnknownFamily(s.to_string()))
    }
}

/// The six cells of the `(k, δ, g)` parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExtremalCase {
    /// `k > δ`, `δ < g`
    DegreeBelowCutAndGood,
    /// `k > δ ≥ g`
    DegreeBelowCut,
    /// `2 ≤ k ≤ δ < g`
    ModerateCutDegreeBelowGood,
    /// `1 = k ≤ δ < g`
    UnitCutDegreeBelowGood,
    /// `k ≤ δ`, `g ≤ δ < g + k`
    DegreeNearGood,
    /// `δ ≥ g + k`
    DegreeAtLeastCutPlusGood,
}

impl ExtremalCase {
    pub const ALL: [ExtremalCase; 6] = [
        ExtremalCase::DegreeBelowCutAndGood,
        ExtremalCase::DegreeBelowCut,
        ExtremalCase::ModerateCutDegreeBelowGood,
        ExtremalCase::UnitCutDegreeBelowGood,
        ExtremalCase::DegreeNearGood,
        ExtremalCase::DegreeAtLeastCutPlusGood,
    ];

    pub fn applies(self, k: usize, delta: usize, g: usize) -> bool {
        match self {
            ExtremalCase::DegreeBelowCutAndGood => k > delta && delta < g,
            ExtremalCase::DegreeBelowCut => k > delta && delta >= g,
            ExtremalCase::ModerateCutDegreeBelowGood => 2 <= k && k <= delta && delta < g,
            ExtremalCase::UnitCutDegreeBelowGood => k == 1 && delta < g,
            ExtremalCase::DegreeNearGood => k <= delta && g <= delta && delta < g + k,
            ExtremalCase::DegreeAtLeastCutPlusGood => delta >= g + k,
        }
    }

    pub fn family(self) -> FamilyId {
        match self {
            ExtremalCase::DegreeBelowCutAndGood => FamilyId::Delta0,
            ExtremalCase::DegreeBelowCut | ExtremalCase::DegreeNearGood => FamilyId::DeltaMinusG,
            ExtremalCase::ModerateCutDegreeBelowGood => FamilyId::KMinusOne,
            ExtremalCase::UnitCutDegreeBelowGood => FamilyId::ZeroDelta,
            ExtremalCase::DegreeAtLeastCutPlusGood => FamilyId::CliqueJoin,
        }
    }
}

/// The unique case containing `(k, δ, g)` for `k, δ >= 1`. Errors if none or several apply.
pub fn extremal_case(k: usize, delta: usize, g: usize) -> Result<ExtremalCase, FamilyError> {
    let hits: Vec<ExtremalCase> = ExtremalCase::ALL
        .into_iter()
        .filter(|c| c.applies(k, delta, g))
        .collect();
    match hits.as_slice() {
        [one] => Ok(*one),
        [] => Err(FamilyError::Uncovered { k, delta, g }),
        _ => Err(FamilyError::Overlap(hits)),
    }
}

/// Smallest order the extremal claims cover: `k + r(g+1)`.
pub fn hypothesis_bound(k: usize, g: usize, r: usize) -> usize {
    k + r * (g + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub family: FamilyId,
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub g: usize,
    pub r: usize,
}

/// A constructed family member together with its distinguished vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyGraph {
    pub params: FamilyParams,
    pub graph: Graph,
    /// A g-good r-component cut of size `k`.
    pub witness: VertexSet,
    /// A vertex of minimum degree `δ`.
    pub min_degree_vertex: usize,
}

/// Asserts the extremal family for `(n, k, δ, g, r)`.
pub fn claimed_extremal(n: usize, k: usize, delta: usize, g: usize, r: usize) -> Result<FamilyParams, FamilyError> {
    let bound = hypothesis_bound(k, g, r);
    if n < bound {
        return Err(FamilyError::BelowHypothesis { n, bound });
    }
    let case = extremal_case(k, delta, g)?;
    Ok(FamilyParams { family: case.family(), n, k, delta, g, r })
}

/// Extremal graph for given order, `κ_g`, `δ` and `g`: the `r = 2` instance
/// of [`claimed_extremal`].
pub fn neighbor_cut_family(n: usize, kappa_g: usize, delta: usize, g: usize) -> Result<FamilyGraph, FamilyError> {
    construct(&claimed_extremal(n, kappa_g, delta, g, 2)?)
}

impl FamilyParams {
    pub fn new(family: FamilyId, n: usize, k: usize, delta: usize, g: usize, r: usize) -> Self {
        FamilyParams { family, n, k, delta, g, r }
    }

    fn fail(&self, constraint: &'static str) -> FamilyError {
        FamilyError::Infeasible {
            family: self.family,
            n: self.n,
            k: self.k,
            delta: self.delta,
            g: self.g,
            r: self.r,
            constraint,
        }
    }

    /// Size of the big clique.
    pub fn big_clique(&self) -> usize {
        match self.family {
            FamilyId::CliqueJoin => self.n - self.k - (self.delta + 1 - self.k) * (self.r - 1),
            _ => self.n - (self.r - 1) * (self.g + 1) - self.k,
        }
    }

    /// Full feasibility: [`check_structure`](Self::check_structure) plus the
    /// case conditions under which the family is claimed extremal and its
    /// cut value is exactly `k`.
    pub fn check(&self) -> Result<(), FamilyError> {
        self.check_structure()?;
        let &FamilyParams { family, k, delta, g, r, .. } = self;
        match family {
            FamilyId::Delta0 | FamilyId::KMinusOne | FamilyId::ZeroDelta if delta >= g => {
                Err(self.fail("delta < g"))
            }
            // with g = 0 and r = 2, N(u) is itself a cut of size delta
            FamilyId::DeltaMinusG if g == 0 && r == 2 && delta < k => {
                Err(self.fail("g = 0 and r = 2 require delta >= k"))
            }
            // delta - g = k is buildable but belongs to the join family's case
            FamilyId::DeltaMinusG if delta >= g + k => Err(self.fail("delta < g+k")),
            FamilyId::CliqueJoin if delta < g + k => Err(self.fail("delta >= g+k")),
            _ => Ok(()),
        }
    }

    /// Constraints needed to assemble the graph with minimum degree `δ` and a
    /// witness cut of size `k`. The first violated one is reported by name.
    pub fn check_structure(&self) -> Result<(), FamilyError> {
        let &FamilyParams { family, n, k, delta, g, r } = self;
        if r < 2 {
            return Err(self.fail("r >= 2"));
        }
        if k < 1 {
            return Err(self.fail("k >= 1"));
        }
        if delta < 1 {
            return Err(self.fail("delta >= 1"));
        }
        if n < hypothesis_bound(k, g, r) {
            return Err(self.fail("n >= k + r(g+1)"));
        }
        if n > crate::graph::MAX_ORDER {
            return Err(self.fail("n <= 64"));
        }
        match family {
            FamilyId::Delta0 => {
                if delta + 1 > k {
                    return Err(self.fail("delta <= k-1"));
                }
            }
            FamilyId::DeltaMinusG => {
                if delta < g {
                    return Err(self.fail("delta >= g"));
                }
                if delta - g > k {
                    return Err(self.fail("delta - g <= k"));
                }
            }
            FamilyId::KMinusOne => {
                if k < 2 {
                    return Err(self.fail("k >= 2"));
                }
                if k > delta {
                    return Err(self.fail("k <= delta"));
                }
                if delta >= g + k {
                    return Err(self.fail("delta < g+k"));
                }
                if delta + 1 - k > self.big_clique() {
                    return Err(self.fail("delta-k+1 <= n-(r-1)(g+1)-k"));
                }
            }
            FamilyId::ZeroDelta => {
                if k != 1 {
                    return Err(self.fail("k = 1"));
                }
                if delta < r {
                    return Err(self.fail("delta >= r"));
                }
                if delta > g {
                    return Err(self.fail("delta <= g"));
                }
                if delta + 1 - r > self.big_clique() {
                    return Err(self.fail("delta-r+1 <= n-(r-1)(g+1)-1"));
                }
            }
            FamilyId::CliqueJoin => {
                if delta < k {
                    return Err(self.fail("delta >= k"));
                }
                let small = delta + 1 - k;
                if n < k + small * r {
                    return Err(self.fail("n-k-(delta-k+1)(r-1) >= delta-k+1"));
                }
            }
        }
        Ok(())
    }
}

struct Layout {
    edges: Vec<(usize, usize)>,
    next: usize,
}

impl Layout {
    fn new(start: usize) -> Self {
        Layout { edges: Vec::new(), next: start }
    }

    /// Allocate a clique of `size` fresh vertices, joined to `join`.
    fn clique(&mut self, size: usize, join: VertexSet) -> VertexSet {
        let part = VertexSet::range(self.next, self.next + size);
        for a in part {
            for b in part.iter().filter(|&b| b > a) {
                self.edges.push((a, b));
            }
            for c in join {
                self.edges.push((c, a));
            }
        }
        self.next += size;
        part
    }

    fn attach(&mut self, u: usize, targets: impl IntoIterator<Item = usize>) {
        for t in targets {
            self.edges.push((u, t));
        }
    }
}

/// Build the family member for `p`. Only [`FamilyParams::check_structure`]
/// is enforced, so members outside their extremal case can still be built.
pub fn construct(p: &FamilyParams) -> Result<FamilyGraph, FamilyError> {
    p.check_structure()?;
    let &FamilyParams { family, n, k, delta, g, r } = p;
    let big = p.big_clique();
    let (layout, witness, min_degree_vertex) = match family {
        FamilyId::Delta0 | FamilyId::KMinusOne => {
            let mut l = Layout::new(1);
            let core = l.clique(k - 1, VertexSet::EMPTY);
            let big_part = l.clique(big, core);
            for _ in 0..r - 1 {
                l.clique(g + 1, core);
            }
            if family == FamilyId::Delta0 {
                l.attach(0, core.iter().take(delta));
            } else {
                l.attach(0, core);
                l.attach(0, big_part.iter().take(delta + 1 - k));
            }
            (l, core.with(0), 0)
        }
        FamilyId::DeltaMinusG => {
            let mut l = Layout::new(1);
            let core = l.clique(k, VertexSet::EMPTY);
            l.clique(big, core);
            for _ in 0..r - 2 {
                l.clique(g + 1, core);
            }
            let last = l.clique(g, core);
            l.attach(0, core.iter().take(delta - g));
            l.attach(0, last);
            (l, core, 0)
        }
        FamilyId::ZeroDelta => {
            let mut l = Layout::new(1);
            let big_part = l.clique(big, VertexSet::EMPTY);
            l.attach(0, big_part.iter().take(delta + 1 - r));
            for _ in 0..r - 1 {
                let small = l.clique(g + 1, VertexSet::EMPTY);
                l.attach(0, small.first());
            }
            (l, VertexSet::singleton(0), 0)
        }
        FamilyId::CliqueJoin => {
            let mut l = Layout::new(0);
            let core = l.clique(k, VertexSet::EMPTY);
            l.clique(big, core);
            let small = delta + 1 - k;
            let mut last = VertexSet::EMPTY;
            for _ in 0..r - 1 {
                last = l.clique(small, core);
            }
            (l, core, last.first().expect("r >= 2 gives a small part"))
        }
    };
    debug_assert_eq!(layout.next, n);
    let graph = Graph::from_edges(n, &layout.edges)?;
    Ok(FamilyGraph { params: *p, graph, witness, min_degree_vertex })
}
