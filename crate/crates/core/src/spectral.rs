//! Adjacency spectral radius, Perron vectors and join-of-cliques quotients.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};

/// Default eigen-residual tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Relative tolerance for equal Perron entries.
pub const TWIN_TOLERANCE: f64 = 1e-9;

const SHIFT: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("power iteration did not converge: residual {residual:e} after {iterations} iterations")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("vertices must be distinct")]
    SameVertex,
    #[error("infeasible clique-join shape: {0}")]
    InfeasibleShape(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Dominant eigenpair of an adjacency matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub rho: f64,
    /// Unit Euclidean norm. Positive on connected graphs; for disconnected
    /// graphs it lives on the dominant component and is zero elsewhere.
    pub perron: Vec<f64>,
    pub iterations: usize,
    /// `max_v |(A x)_v - rho x_v|`.
    pub residual: f64,
}

/// Spectral radius with the default tolerance.
pub fn rho(g: &Graph) -> Result<f64, SpectralError> {
    Ok(spectral_radius(g, DEFAULT_TOLERANCE)?.rho)
}

/// Largest adjacency eigenvalue and its Perron vector.
///
/// Each component is handled separately by power iteration on `A + I`; the
/// result is the component with the largest eigenvalue (least vertex wins a
/// tie).
pub fn spectral_radius(g: &Graph, tol: f64) -> Result<SpectralResult, SpectralError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(SpectralError::BadTolerance(tol));
    }
    let n = g.order();
    let mut best: Option<(Vec<usize>, SpectralResult)> = None;
    let mut total_iterations = 0;
    for comp in g.components(Default::default()) {
        let members: Vec<usize> = comp.iter().collect();
        let local = if members.len() == n { g.clone() } else { g.induced(comp)? };
        let res = power_iteration(&local, tol)?;
        total_iterations += res.iterations;
        if best.as_ref().is_none_or(|(_, b)| res.rho > b.rho) {
            best = Some((members, res));
        }
    }
    let (members, local) = best.expect("graphs have at least one vertex");
    let mut perron = vec![0.0; n];
    for (i, &v) in members.iter().enumerate() {
        perron[v] = local.perron[i];
    }
    Ok(SpectralResult {
        rho: local.rho,
        perron,
        iterations: total_iterations,
        residual: local.residual,
    })
}

fn iteration_cap(n: usize, tol: f64) -> usize {
    (200.0 * n as f64 * (1.0 / tol).ln().max(1.0)).ceil() as usize
}

fn multiply(g: &Graph, x: &[f64], out: &mut [f64]) {
    for (v, o) in out.iter_mut().enumerate() {
        *o = g.neighbors(v).iter().map(|w| x[w]).sum();
    }
}

/// Power iteration on a connected graph.
fn power_iteration(g: &Graph, tol: f64) -> Result<SpectralResult, SpectralError> {
    let n = g.order();
    if n == 1 {
        return Ok(SpectralResult { rho: 0.0, perron: vec![1.0], iterations: 0, residual: 0.0 });
    }
    // degree-weighted start: positive, and already close for near-regular graphs
    let mut x: Vec<f64> = (0..n).map(|v| 1.0 + g.degree(v) as f64).collect();
    normalize(&mut x);
    let mut ax = vec![0.0; n];
    let cap = iteration_cap(n, tol);
    let mut residual = f64::INFINITY;
    for it in 1..=cap {
        multiply(g, &x, &mut ax);
        let rho: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
        residual = x
            .iter()
            .zip(&ax)
            .map(|(xi, ai)| (ai - rho * xi).abs())
            .fold(0.0, f64::max);
        if residual <= tol * rho.max(1.0) {
            return Ok(SpectralResult { rho, perron: x, iterations: it, residual });
        }
        for (xi, ai) in x.iter_mut().zip(&ax) {
            *xi = ai + SHIFT * *xi;
        }
        normalize(&mut x);
    }
    Err(SpectralError::NoConvergence { iterations: cap, residual })
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
}

/// `K_core ∨ (K_{parts[0]} ∪ ... ∪ K_{parts[t-1]})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueJoinShape {
    pub core: usize,
    pub parts: Vec<usize>,
}

impl CliqueJoinShape {
    pub fn new(core: usize, parts: Vec<usize>) -> Result<Self, SpectralError> {
        let shape = CliqueJoinShape { core, parts };
        shape.validate()?;
        Ok(shape)
    }

    pub fn order(&self) -> usize {
        self.core + self.parts.iter().sum::<usize>()
    }

    fn validate(&self) -> Result<(), SpectralError> {
        if self.parts.is_empty() {
            return Err(SpectralError::InfeasibleShape("no clique parts"));
        }
        if self.parts.contains(&0) {
            return Err(SpectralError::InfeasibleShape("empty clique part"));
        }
        if self.core == 0 && self.parts.len() > 1 {
            return Err(SpectralError::InfeasibleShape("disconnected: several parts and no core"));
        }
        if self.order() > crate::graph::MAX_ORDER {
            return Err(SpectralError::InfeasibleShape("order above 64"));
        }
        Ok(())
    }

    pub fn graph(&self) -> Result<Graph, SpectralError> {
        Ok(Graph::clique_join(self.core, &self.parts)?)
    }

    /// Quotient matrix of the partition {core, part_1, ..., part_t}. The core
    /// row is dropped when the core is empty.
    pub fn quotient_matrix(&self) -> Vec<Vec<f64>> {
        let t = self.parts.len();
        let s = self.core as f64;
        let mut rows = Vec::with_capacity(t + 1);
        if self.core > 0 {
            let mut row = vec![s - 1.0];
            row.extend(self.parts.iter().map(|&p| p as f64));
            rows.push(row);
        }
        for (i, &p) in self.parts.iter().enumerate() {
            let mut row = Vec::with_capacity(t + 1);
            if self.core > 0 {
                row.push(s);
            }
            row.extend((0..t).map(|j| if i == j { p as f64 - 1.0 } else { 0.0 }));
            rows.push(row);
        }
        rows
    }

    /// Sizes matching the rows of [`quotient_matrix`](Self::quotient_matrix).
    fn cell_sizes(&self) -> Vec<f64> {
        let mut sizes = Vec::with_capacity(self.parts.len() + 1);
        if self.core > 0 {
            sizes.push(self.core as f64);
        }
        sizes.extend(self.parts.iter().map(|&p| p as f64));
        sizes
    }
}

/// Characteristic polynomial `det(λI - M)` by Leverrier–Faddeev.
/// Coefficients are returned highest degree first; the leading one is 1.
pub fn characteristic_polynomial(m: &[Vec<f64>]) -> Vec<f64> {
    let d = m.len();
    let mut coeffs = vec![1.0];
    // N_k = M (N_{k-1} + c_{k-1} I), c_k = -tr(N_k) / k
    let mut acc = vec![vec![0.0; d]; d];
    let mut c_prev = 1.0;
    for k in 1..=d {
        let mut shifted = acc.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] += c_prev;
        }
        let mut next = vec![vec![0.0; d]; d];
        for i in 0..d {
            for l in 0..d {
                if m[i][l] == 0.0 {
                    continue;
                }
                for j in 0..d {
                    next[i][j] += m[i][l] * shifted[l][j];
                }
            }
        }
        let trace: f64 = (0..d).map(|i| next[i][i]).sum();
        let c = -trace / k as f64;
        coeffs.push(c);
        acc = next;
        c_prev = c;
    }
    coeffs
}

fn horner(coeffs: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Number of eigenvalues of the symmetric matrix `sym` strictly above `x`,
/// from the inertia of `sym - xI` (Sylvester).
fn eigenvalues_above(sym: &[Vec<f64>], x: f64) -> usize {
    let d = sym.len();
    let mut a: Vec<Vec<f64>> = sym.to_vec();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= x;
    }
    let mut positive = 0;
    for k in 0..d {
        let mut pivot = a[k][k];
        if pivot == 0.0 {
            pivot = -f64::EPSILON * (1.0 + x.abs());
            a[k][k] = pivot;
        }
        if pivot > 0.0 {
            positive += 1;
        }
        let (done, rest) = a.split_at_mut(k + 1);
        let pivot_row = &done[k];
        for row in rest {
            let f = row[k] / pivot;
            if f == 0.0 {
                continue;
            }
            for (x, p) in row.iter_mut().zip(pivot_row).skip(k + 1) {
                *x -= f * p;
            }
        }
    }
    positive
}

/// Spectral radius of `K_s ∨ (K_{n_1} ∪ ... ∪ K_{n_t})` from its equitable
/// quotient.
///
/// The largest eigenvalue is bracketed between the least and greatest
/// quotient row sums and bisected to `1e-13` (the inertia of the
/// symmetrised quotient decides which side holds it), then polished by a
/// Newton step on the characteristic polynomial.
pub fn quotient_spectral_radius(shape: &CliqueJoinShape) -> Result<f64, SpectralError> {
    shape.validate()?;
    let q = shape.quotient_matrix();
    let sizes = shape.cell_sizes();
    let d = q.len();
    // D^{1/2} Q D^{-1/2} is symmetric since |i| q_ij = |j| q_ji
    let sym: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| q[i][j] * (sizes[i] / sizes[j]).sqrt()).collect())
        .collect();
    let row_sums: Vec<f64> = q.iter().map(|r| r.iter().sum()).collect();
    let mut lo = row_sums.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = row_sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= 0.0 {
        return Ok(hi);
    }
    // keep the invariant: some eigenvalue > lo - margin, none > hi
    lo -= 1e-9;
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if eigenvalues_above(&sym, mid) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    let poly = characteristic_polynomial(&q);
    let (p, dp) = horner(&poly, root);
    if dp != 0.0 {
        let polished = root - p / dp;
        if (polished - root).abs() < 1e-9 && horner(&poly, polished).0.abs() <= p.abs() {
            return Ok(polished);
        }
    }
    Ok(root)
}

/// Structural relation between two vertices, read off their neighbourhoods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerronRelation {
    /// `N(v) - u ⊊ N(u) - v`, so `x(u) > x(v)`.
    Dominates,
    /// `N(u) - v ⊊ N(v) - u`, so `x(u) < x(v)`.
    Dominated,
    /// `N(v) ⊆ N[u]` and `N(u) ⊆ N[v]`, so `x(u) = x(v)`.
    Twin,
    Incomparable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerronComparison {
    pub relation: PerronRelation,
    pub x_u: f64,
    pub x_v: f64,
    /// Whether the measured entries agree with what the relation implies.
    pub consistent: bool,
}

pub fn perron_relation(g: &Graph, u: usize, v: usize) -> PerronRelation {
    let nu = g.neighbors(u).without(v);
    let nv = g.neighbors(v).without(u);
    if nu == nv {
        PerronRelation::Twin
    } else if nv.is_subset(nu) {
        PerronRelation::Dominates
    } else if nu.is_subset(nv) {
        PerronRelation::Dominated
    } else {
        PerronRelation::Incomparable
    }
}

/// Classify `(u, v)` structurally and check the Perron entries against it.
pub fn perron_compare(g: &Graph, u: usize, v: usize) -> Result<PerronComparison, SpectralError> {
    for w in [u, v] {
        if w >= g.order() {
            return Err(SpectralError::VertexOutOfRange(w));
        }
    }
    if u == v {
        return Err(SpectralError::SameVertex);
    }
    if !g.is_connected() {
        return Err(SpectralError::Disconnected);
    }
    let res = spectral_radius(g, DEFAULT_TOLERANCE)?;
    let (x_u, x_v) = (res.perron[u], res.perron[v]);
    let relation = perron_relation(g, u, v);
    let consistent = match relation {
        PerronRelation::Dominates => x_u > x_v,
        PerronRelation::Dominated => x_u < x_v,
        PerronRelation::Twin => (x_u - x_v).abs() <= TWIN_TOLERANCE * x_u.max(x_v),
        PerronRelation::Incomparable => true,
    };
    Ok(PerronComparison { relation, x_u, x_v, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn complete_cycle_star() {
        assert!(close(rho(&Graph::complete(8).unwrap()).unwrap(), 7.0, 1e-10));
        assert!(close(rho(&Graph::cycle(4).unwrap()).unwrap(), 2.0, 1e-10));
        // characteristic polynomial of K_{1,m} is λ^{m-1}(λ² - m)
        assert!(close(rho(&Graph::star(4).unwrap()).unwrap(), 2.0, 1e-10));
        assert!(close(rho(&Graph::star(7).unwrap()).unwrap(), 7f64.sqrt(), 1e-10));
    }

    #[test]
    fn single_vertex_and_edgeless() {
        let r = spectral_radius(&Graph::empty(1).unwrap(), DEFAULT_TOLERANCE).unwrap();
        assert_eq!((r.rho, r.perron.clone()), (0.0, vec![1.0]));
        let r = spectral_radius(&Graph::empty(3).unwrap(), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.rho, 0.0);
        assert_eq!(r.perron, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn disconnected_uses_dominant_component() {
        // K_2 ∪ K_4, the K_4 on vertices 2..6
        let g = Graph::from_edges(6, &[(0, 1), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)]).unwrap();
        let r = spectral_radius(&g, DEFAULT_TOLERANCE).unwrap();
        assert!(close(r.rho, 3.0, 1e-10));
        assert_eq!(&r.perron[..2], &[0.0, 0.0]);
        assert!(r.perron[2..].iter().all(|&x| close(x, 0.5, 1e-9)));
    }

    #[test]
    fn bad_tolerance() {
        let g = Graph::path(3).unwrap();
        assert!(matches!(spectral_radius(&g, 0.0), Err(SpectralError::BadTolerance(_))));
        assert!(matches!(spectral_radius(&g, f64::NAN), Err(SpectralError::BadTolerance(_))));
    }

    #[test]
    fn perron_vector_is_positive_unit() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)]).unwrap();
        let r = spectral_radius(&g, DEFAULT_TOLERANCE).unwrap();
        assert!(r.perron.iter().all(|&x| x > 0.0));
        assert!(close(r.perron.iter().map(|x| x * x).sum::<f64>(), 1.0, 1e-12));
        assert!(r.residual <= DEFAULT_TOLERANCE * r.rho.max(1.0));
    }

    #[test]
    fn quotient_examples() {
        let k8 = CliqueJoinShape::new(0, vec![8]).unwrap();
        assert!(close(quotient_spectral_radius(&k8).unwrap(), 7.0, 1e-12));
        let p3 = CliqueJoinShape::new(1, vec![1, 1]).unwrap();
        assert!(close(quotient_spectral_radius(&p3).unwrap(), 2f64.sqrt(), 1e-12));
        let shape = CliqueJoinShape::new(2, vec![3, 2]).unwrap();
        let dense = rho(&shape.graph().unwrap()).unwrap();
        assert!(close(quotient_spectral_radius(&shape).unwrap(), dense, 1e-9));
    }

    #[test]
    fn infeasible_shapes() {
        assert!(CliqueJoinShape::new(0, vec![2, 3]).is_err());
        assert!(CliqueJoinShape::new(2, vec![]).is_err());
        assert!(CliqueJoinShape::new(1, vec![3, 0]).is_err());
    }

    #[test]
    fn leverrier_faddeev_matches_known_polynomials() {
        // path P_3: λ³ - 2λ
        let p = characteristic_polynomial(&[
            vec![0.0, 1.0, 0.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
        ]);
        let expected = [1.0, 0.0, -2.0, 0.0];
        assert!(p.iter().zip(expected).all(|(a, b)| close(*a, b, 1e-12)), "{p:?}");
    }

    #[test]
    fn perron_compare_examples() {
        let star = Graph::star(4).unwrap();
        let c = perron_compare(&star, 0, 1).unwrap();
        assert_eq!(c.relation, PerronRelation::Dominates);
        assert!(c.consistent && c.x_u > c.x_v);
        let c = perron_compare(&star, 2, 0).unwrap();
        assert_eq!(c.relation, PerronRelation::Dominated);
        assert!(c.consistent);

        let k4 = Graph::complete(4).unwrap();
        let c = perron_compare(&k4, 1, 3).unwrap();
        assert_eq!(c.relation, PerronRelation::Twin);
        assert!(c.consistent);

        let p4 = Graph::path(4).unwrap();
        assert_eq!(perron_relation(&p4, 0, 3), PerronRelation::Incomparable);
    }

    #[test]
    fn perron_compare_errors() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(perron_compare(&g, 0, 2), Err(SpectralError::Disconnected));
        let p = Graph::path(3).unwrap();
        assert_eq!(perron_compare(&p, 1, 1), Err(SpectralError::SameVertex));
        assert_eq!(perron_compare(&p, 0, 3), Err(SpectralError::VertexOutOfRange(3)));
    }
}
