//! Executable spectral comparisons: edge rotation, proper subgraphs and
//! rebalancing the cliques of a join.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{random_permutation, Graph, GraphError, VertexSet};
use crate::spectral::{self, CliqueJoinShape, SpectralError, DEFAULT_TOLERANCE};

/// Required gap for a strict spectral-radius inequality.
pub const STRICT_MARGIN: f64 = 1e-10;

/// Entries this close count as `x(u) >= x(v)`.
pub const PERRON_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("rotation moves no edges")]
    EmptyRotation,
    #[error("u and v must be distinct vertices")]
    SameVertex,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("vertex {0} is not a neighbour of v")]
    NotNeighborOfV(usize),
    #[error("vertex {0} is already adjacent to u")]
    AlreadyNeighborOfU(usize),
    #[error("u or v is in the moved set")]
    EndpointMoved,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("not a subgraph under the identity embedding: {0}")]
    NotSubgraph(&'static str),
    #[error("join rebalancing hypothesis fails: {0}")]
    Hypothesis(&'static str),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Move the edges `v w` (`w ∈ moved`) to `u w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationSpec {
    pub u: usize,
    pub v: usize,
    pub moved: VertexSet,
}

impl RotationSpec {
    pub fn validate(&self, g: &Graph) -> Result<(), TransformError> {
        let n = g.order();
        for w in [self.u, self.v] {
            if w >= n {
                return Err(TransformError::VertexOutOfRange(w));
            }
        }
        if let Some(w) = self.moved.iter().find(|&w| w >= n) {
            return Err(TransformError::VertexOutOfRange(w));
        }
        if self.u == self.v {
            return Err(TransformError::SameVertex);
        }
        if self.moved.is_empty() {
            return Err(TransformError::EmptyRotation);
        }
        if self.moved.contains(self.u) || self.moved.contains(self.v) {
            return Err(TransformError::EndpointMoved);
        }
        if let Some(w) = self.moved.difference(g.neighbors(self.v)).first() {
            return Err(TransformError::NotNeighborOfV(w));
        }
        if let Some(w) = self.moved.intersection(g.neighbors(self.u)).first() {
            return Err(TransformError::AlreadyNeighborOfU(w));
        }
        Ok(())
    }

    /// The spec that undoes this one on the rotated graph.
    pub fn inverse(&self) -> RotationSpec {
        RotationSpec { u: self.v, v: self.u, moved: self.moved }
    }
}

/// `G*`: delete `v w` and add `u w` for every moved `w`.
pub fn rotate(g: &Graph, spec: &RotationSpec) -> Result<Graph, TransformError> {
    spec.validate(g)?;
    let remove: Vec<_> = spec.moved.iter().map(|w| (spec.v, w)).collect();
    let add: Vec<_> = spec.moved.iter().map(|w| (spec.u, w)).collect();
    Ok(g.edited(&add, &remove)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RotationVerdict {
    /// `x(u) < x(v)`: nothing is claimed.
    NotApplicable { x_u: f64, x_v: f64 },
    Checked {
        rho_before: f64,
        rho_after: f64,
        /// `ρ(G*) > ρ(G) + STRICT_MARGIN`.
        holds: bool,
        /// Whether `G*` stayed connected; logged, not required.
        rotated_connected: bool,
    },
}

impl RotationVerdict {
    pub fn violated(&self) -> bool {
        matches!(self, RotationVerdict::Checked { holds: false, .. })
    }
}

/// If `x(u) >= x(v)` then rotating strictly increases the spectral radius.
pub fn check_rotation(g: &Graph, spec: &RotationSpec) -> Result<RotationVerdict, TransformError> {
    spec.validate(g)?;
    if !g.is_connected() {
        return Err(TransformError::Disconnected);
    }
    let before = spectral::spectral_radius(g, DEFAULT_TOLERANCE)?;
    let (x_u, x_v) = (before.perron[spec.u], before.perron[spec.v]);
    if x_u < x_v - PERRON_SLACK {
        return Ok(RotationVerdict::NotApplicable { x_u, x_v });
    }
    let rotated = rotate(g, spec)?;
    let rho_after = spectral::rho(&rotated)?;
    Ok(RotationVerdict::Checked {
        rho_before: before.rho,
        rho_after,
        holds: rho_after > before.rho + STRICT_MARGIN,
        rotated_connected: rotated.is_connected(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgraphVerdict {
    pub rho_graph: f64,
    pub rho_subgraph: f64,
    /// `ρ(H) < ρ(G) - STRICT_MARGIN`.
    pub holds: bool,
}

/// A proper subgraph of a connected graph has strictly smaller spectral
/// radius. `h` embeds by the identity: its vertex `i` is vertex `i` of `g`.
pub fn check_subgraph(g: &Graph, h: &Graph) -> Result<SubgraphVerdict, TransformError> {
    if !g.is_connected() {
        return Err(TransformError::Disconnected);
    }
    if h.order() > g.order() {
        return Err(TransformError::NotSubgraph("more vertices than the host"));
    }
    for (u, v) in h.edges() {
        if !g.has_edge(u, v) {
            return Err(TransformError::NotSubgraph("edge missing from the host"));
        }
    }
    if h.order() == g.order() && h.edge_count() == g.edge_count() {
        return Err(TransformError::NotSubgraph("not proper"));
    }
    let rho_graph = spectral::rho(g)?;
    let rho_subgraph = spectral::rho(h)?;
    Ok(SubgraphVerdict { rho_graph, rho_subgraph, holds: rho_subgraph < rho_graph - STRICT_MARGIN })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JoinVerdict {
    pub n: usize,
    pub rho_parts: f64,
    pub balanced_parts: Vec<usize>,
    pub rho_balanced: f64,
    /// `ρ(parts) < ρ(balanced) - STRICT_MARGIN`.
    pub holds: bool,
}

/// For `n_1 >= ... >= n_t >= p` and `n_1 < n - s - p(t-1)`, moving every part
/// but one down to `p` strictly increases the spectral radius of
/// `K_s ∨ (∪ K_{n_i})`.
pub fn check_join_rebalance(s: usize, parts: &[usize], p: usize) -> Result<JoinVerdict, TransformError> {
    let t = parts.len();
    if t < 2 {
        return Err(TransformError::Hypothesis("at least two parts"));
    }
    if p == 0 {
        return Err(TransformError::Hypothesis("p >= 1"));
    }
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(TransformError::Hypothesis("parts must be non-increasing"));
    }
    if parts[t - 1] < p {
        return Err(TransformError::Hypothesis("every part at least p"));
    }
    let n = s + parts.iter().sum::<usize>();
    let big = n - s - p * (t - 1);
    if parts[0] >= big {
        return Err(TransformError::Hypothesis("n_1 < n - s - p(t-1)"));
    }
    let mut balanced_parts = vec![big];
    balanced_parts.extend(std::iter::repeat_n(p, t - 1));
    let (rho_parts, rho_balanced) = if s == 0 {
        // disjoint cliques: the largest one dominates
        ((parts[0] - 1) as f64, (big - 1) as f64)
    } else {
        (
            spectral::quotient_spectral_radius(&CliqueJoinShape::new(s, parts.to_vec())?)?,
            spectral::quotient_spectral_radius(&CliqueJoinShape::new(s, balanced_parts.clone())?)?,
        )
    };
    Ok(JoinVerdict {
        n,
        rho_parts,
        balanced_parts,
        rho_balanced,
        holds: rho_parts < rho_balanced - STRICT_MARGIN,
    })
}

/// Tally of a randomised spectral comparison.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub trials: usize,
    pub checked: usize,
    pub violations: usize,
    /// Rotations whose result was disconnected (still checked).
    pub disconnected_results: usize,
    /// Smallest observed `ρ` gap in the predicted direction.
    pub min_margin: f64,
    /// graph6 of the first violating input, if any.
    pub first_violation: Option<String>,
}

impl FuzzSummary {
    fn merge(mut self, other: FuzzSummary) -> FuzzSummary {
        self.trials += other.trials;
        self.checked += other.checked;
        self.violations += other.violations;
        self.disconnected_results += other.disconnected_results;
        self.min_margin = self.min_margin.min(other.min_margin);
        self.first_violation = self.first_violation.or(other.first_violation);
        self
    }

    fn empty() -> Self {
        FuzzSummary { min_margin: f64::INFINITY, ..Default::default() }
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn random_host<R: Rng>(max_n: usize, rng: &mut R) -> Graph {
    let n = rng.gen_range(3..=max_n.max(3));
    let p = rng.gen_range(0.1..0.8);
    Graph::random_connected(n, p, rng).expect("order within range")
}

/// One rotation trial: draw hosts until one admits a valid spec with
/// `x(u) >= x(v)`, then check it.
fn rotation_trial(seed: u64, trial: usize, max_n: usize) -> Result<FuzzSummary, TransformError> {
    let mut rng = trial_rng(seed, trial);
    let mut summary = FuzzSummary::empty();
    summary.trials = 1;
    loop {
        let g = random_host(max_n, &mut rng);
        let res = spectral::spectral_radius(&g, DEFAULT_TOLERANCE)?;
        let n = g.order();
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .filter(|&(a, b)| res.perron[a] >= res.perron[b] - PERRON_SLACK)
            .collect();
        pairs.shuffle(&mut rng);
        for (u, v) in pairs {
            let pool: Vec<usize> = g.neighbors(v).difference(g.closed_neighbors(u)).iter().collect();
            if pool.is_empty() {
                continue;
            }
            let count = rng.gen_range(1..=pool.len());
            let moved: VertexSet = pool.choose_multiple(&mut rng, count).copied().collect();
            let spec = RotationSpec { u, v, moved };
            if let RotationVerdict::Checked { rho_before, rho_after, holds, rotated_connected } =
                check_rotation(&g, &spec)?
            {
                summary.checked = 1;
                summary.min_margin = rho_after - rho_before;
                if !rotated_connected {
                    summary.disconnected_results = 1;
                }
                if !holds {
                    summary.violations = 1;
                    summary.first_violation = Some(crate::graph6::encode(&g));
                }
                return Ok(summary);
            }
        }
    }
}

/// Rotation check over `trials` random connected graphs of order `3..=max_n`.
/// Each trial has its own RNG stream, so results do not depend on scheduling.
pub fn fuzz_rotation(trials: usize, max_n: usize, seed: u64) -> Result<FuzzSummary, TransformError> {
    (0..trials)
        .into_par_iter()
        .map(|t| rotation_trial(seed, t, max_n))
        .collect::<Result<Vec<_>, _>>()
        .map(|all| all.into_iter().fold(FuzzSummary::empty(), FuzzSummary::merge))
}

/// Proper-subgraph check: each trial checks one random edge deletion and one
/// random vertex deletion of a random connected graph.
pub fn fuzz_subgraph(trials: usize, max_n: usize, seed: u64) -> Result<FuzzSummary, TransformError> {
    let run = |trial: usize| -> Result<FuzzSummary, TransformError> {
        let mut rng = trial_rng(seed, trial);
        let g = random_host(max_n, &mut rng);
        let mut summary = FuzzSummary::empty();
        summary.trials = 1;
        let edges: Vec<_> = g.edges().collect();
        let &(a, b) = edges.choose(&mut rng).expect("connected graphs on 3+ vertices have edges");
        let minus_edge = g.without_edge(a, b)?;
        // move the deleted vertex to the end so the identity embedding applies
        let v = rng.gen_range(0..g.order());
        let mut perm = random_permutation(g.order(), &mut rng);
        let last = perm.iter().position(|&p| p == g.order() - 1).expect("permutation");
        perm.swap(v, last);
        let host = g.permute(&perm)?;
        let minus_vertex = host.remove_vertex(g.order() - 1)?;
        for (big, small) in [(&g, &minus_edge), (&host, &minus_vertex)] {
            let verdict = check_subgraph(big, small)?;
            summary.checked += 1;
            summary.min_margin = summary.min_margin.min(verdict.rho_graph - verdict.rho_subgraph);
            if !verdict.holds {
                summary.violations += 1;
                summary.first_violation.get_or_insert_with(|| crate::graph6::encode(big));
            }
        }
        Ok(summary)
    };
    (0..trials)
        .into_par_iter()
        .map(run)
        .collect::<Result<Vec<_>, _>>()
        .map(|all| all.into_iter().fold(FuzzSummary::empty(), FuzzSummary::merge))
}

/// Every hypothesis-satisfying `(s, parts, p)` with `s <= max_core`,
/// `2 <= t <= max_parts` and `n <= max_n`.
pub fn join_rebalance_grid(max_core: usize, max_parts: usize, max_n: usize) -> Vec<(usize, Vec<usize>, usize)> {
    fn partitions(remaining: usize, count: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if count == 0 {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for part in (1..=cap.min(remaining)).rev() {
            prefix.push(part);
            partitions(remaining - part, count - 1, part, prefix, out);
            prefix.pop();
        }
    }
    let mut grid = Vec::new();
    for s in 1..=max_core {
        for t in 2..=max_parts {
            for total in t..=max_n.saturating_sub(s) {
                let mut all = Vec::new();
                partitions(total, t, total, &mut Vec::new(), &mut all);
                for parts in all {
                    let smallest = parts[t - 1];
                    for p in 1..=smallest {
                        let n = s + total;
                        if parts[0] < n - s - p * (t - 1) {
                            grid.push((s, parts.clone(), p));
                        }
                    }
                }
            }
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().copied().collect()
    }

    #[test]
    fn rotate_path_into_star() {
        let p4 = Graph::path(4).unwrap();
        let spec = RotationSpec { u: 1, v: 2, moved: set(&[3]) };
        let g = rotate(&p4, &spec).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (1, 3)]);
        assert_eq!(rotate(&g, &spec.inverse()).unwrap(), p4);
    }

    #[test]
    fn rotate_pentagon() {
        let c5 = Graph::cycle(5).unwrap();
        let spec = RotationSpec { u: 0, v: 2, moved: set(&[3]) };
        let g = rotate(&c5, &spec).unwrap();
        assert_eq!(g, Graph::from_edges(5, &[(0, 1), (0, 4), (1, 2), (0, 3), (3, 4)]).unwrap());
        match check_rotation(&c5, &spec).unwrap() {
            RotationVerdict::Checked { rho_before, rho_after, holds, .. } => {
                assert!((rho_before - 2.0).abs() < 1e-10);
                assert!(holds && rho_after > 2.0);
            }
            other => panic!("expected a checked verdict, got {other:?}"),
        }
    }

    #[test]
    fn invalid_rotations() {
        let p4 = Graph::path(4).unwrap();
        let spec = |u, v, m: &[usize]| RotationSpec { u, v, moved: set(m) };
        assert_eq!(rotate(&p4, &spec(1, 2, &[])), Err(TransformError::EmptyRotation));
        assert_eq!(rotate(&p4, &spec(1, 1, &[0])), Err(TransformError::SameVertex));
        assert_eq!(rotate(&p4, &spec(0, 2, &[1])), Err(TransformError::AlreadyNeighborOfU(1)));
        assert_eq!(rotate(&p4, &spec(0, 1, &[3])), Err(TransformError::NotNeighborOfV(3)));
        assert_eq!(rotate(&p4, &spec(0, 1, &[0])), Err(TransformError::EndpointMoved));
        assert_eq!(rotate(&p4, &spec(0, 9, &[1])), Err(TransformError::VertexOutOfRange(9)));
        // twin leaves of a star have N(v) - N(u) = {centre} = u's neighbour
        let star = Graph::star(4).unwrap();
        assert_eq!(rotate(&star, &spec(1, 2, &[0])), Err(TransformError::AlreadyNeighborOfU(0)));
    }

    #[test]
    fn subgraph_examples() {
        let k5 = Graph::complete(5).unwrap();
        let v = check_subgraph(&k5, &Graph::complete(4).unwrap()).unwrap();
        assert!(v.holds && (v.rho_subgraph - 3.0).abs() < 1e-10 && (v.rho_graph - 4.0).abs() < 1e-10);
        let v = check_subgraph(&Graph::cycle(6).unwrap(), &Graph::path(6).unwrap()).unwrap();
        assert!(v.holds && v.rho_subgraph < 2.0);
        assert!(check_subgraph(&Graph::path(6).unwrap(), &Graph::cycle(6).unwrap()).is_err());
        assert!(check_subgraph(&k5, &k5).is_err());
    }

    #[test]
    fn join_rebalance_examples() {
        let v = check_join_rebalance(2, &[3, 3], 2).unwrap();
        assert_eq!((v.n, v.balanced_parts.clone()), (8, vec![4, 2]));
        assert!(v.holds);
        assert_eq!(
            check_join_rebalance(1, &[2, 2, 2], 2),
            Err(TransformError::Hypothesis("n_1 < n - s - p(t-1)"))
        );
        assert!(check_join_rebalance(1, &[2, 3], 1).is_err());
        assert!(check_join_rebalance(0, &[3, 3], 2).unwrap().holds);
    }

    #[test]
    fn grid_is_nonempty_and_valid() {
        let grid = join_rebalance_grid(3, 3, 12);
        assert!(grid.len() >= 30);
        for (s, parts, p) in &grid {
            assert!(check_join_rebalance(*s, parts, *p).is_ok());
        }
    }

    #[test]
    fn small_fuzz_runs_are_reproducible() {
        let a = fuzz_rotation(20, 7, 3).unwrap();
        let b = fuzz_rotation(20, 7, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.checked, 20);
        assert_eq!(a.violations, 0);
    }
}
