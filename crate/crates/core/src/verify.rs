//! Exhaustive check of the extremal-family claims over a population of
//! graphs.
//!
//! Every graph is placed in its class `(δ, k)`, its spectral radius is
//! computed, and each class keeps its two best members. The class maximum is
//! then compared with the family the case dispatcher claims for that class.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{self, CanonError, CanonicalForm};
use crate::connectivity::{self, ConnectivityError, CutQuery};
use crate::families::{self, FamilyError, FamilyId, FamilyParams};
use crate::graph::Graph;
use crate::graph6;
use crate::spectral::{self, SpectralError};

pub const REPORT_SCHEMA: u32 = 1;

/// `|best - claimed|` allowed for a confirmed verdict.
pub const RHO_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Connectivity(#[from] ConnectivityError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("graph of order {found} in a population of order {expected}")]
    MixedOrders { expected: usize, found: usize },
    #[error("class n={n}, k={k}, g={g}, r={r} is below the hypothesis bound; pass --allow-out-of-hypothesis")]
    OutOfHypothesis { n: usize, k: usize, g: usize, r: usize },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// Which connectivity defines the classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    /// g-good r-component connectivity.
    #[default]
    Component,
    /// g-good neighbour connectivity; `r` is fixed at 2.
    Neighbor,
}

impl Measure {
    pub fn query(self, g: usize, r: usize) -> CutQuery {
        match self {
            Measure::Component => CutQuery::full(g, r),
            Measure::Neighbor => CutQuery::neighbor(g),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Component => "component",
            Measure::Neighbor => "neighbor",
        })
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "component" => Ok(Measure::Component),
            "neighbor" | "neighbour" => Ok(Measure::Neighbor),
            other => Err(format!("unknown measure `{other}`")),
        }
    }
}

/// Graphs of order `n`, minimum degree `delta` and connectivity `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassSpec {
    pub n: usize,
    pub delta: usize,
    pub g: usize,
    pub r: usize,
    pub k: usize,
    #[serde(default)]
    pub measure: Measure,
}

impl ClassSpec {
    pub fn in_hypothesis(&self) -> bool {
        self.n >= families::hypothesis_bound(self.k, self.g, self.r)
    }

    pub fn query(&self) -> CutQuery {
        self.measure.query(self.g, self.r)
    }
}

/// `cκ_{g,r}(G)` if `G` has minimum degree `delta` and a valid cut exists.
pub fn classify(graph: &Graph, delta: usize, g: usize, r: usize) -> Result<Option<usize>, VerifyError> {
    if graph.min_degree() != delta {
        return Ok(None);
    }
    Ok(connectivity::connectivity(graph, CutQuery::full(g, r))?)
}

/// `(δ, k)` of a connected graph, or `None` if no valid cut exists.
pub fn class_key(graph: &Graph, measure: Measure, g: usize, r: usize) -> Result<Option<(usize, usize)>, VerifyError> {
    let k = connectivity::connectivity(graph, measure.query(g, r))?;
    Ok(k.map(|k| (graph.min_degree(), k)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedGraph {
    pub rho: f64,
    pub graph6: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimedGraph {
    pub family: FamilyId,
    pub rho: f64,
    pub graph6: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Class maximum equals the claimed family, up to isomorphism.
    Confirmed,
    /// Class maximum differs from the claimed family.
    Refuted,
    /// No graph in the population lies in the class.
    EmptyClass,
    /// The class is nonempty but no family could be claimed for it.
    CoverageAnomaly,
    /// `n < k + r(g+1)`: recorded, nothing is claimed.
    OutOfHypothesis,
}

impl Verdict {
    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::Refuted | Verdict::CoverageAnomaly)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub class: ClassSpec,
    pub population: usize,
    pub best: Option<RankedGraph>,
    pub claimed: Option<ClaimedGraph>,
    pub isomorphic: bool,
    pub second_best_rho: Option<f64>,
    pub runtime_ms: u64,
    pub warnings: Vec<String>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Shuffle the processing order with this seed.
    pub seed: Option<u64>,
    pub allow_out_of_hypothesis: bool,
    /// Record wall-clock time in `runtime_ms` (otherwise 0).
    pub timing: bool,
}

#[derive(Debug, Clone)]
struct Candidate {
    rho: f64,
    canon: CanonicalForm,
}

impl Candidate {
    /// Larger `ρ` first; ties go to the least canonical form.
    fn rank(&self, other: &Self) -> std::cmp::Ordering {
        other.rho.total_cmp(&self.rho).then_with(|| self.canon.cmp(&other.canon))
    }
}

/// Population and best two non-isomorphic members of one class. Merging is
/// associative and commutative, so the result is independent of how the
/// population is split across workers.
#[derive(Debug, Clone, Default)]
struct ClassTally {
    population: usize,
    top: Vec<Candidate>,
}

impl ClassTally {
    fn single(c: Candidate) -> Self {
        ClassTally { population: 1, top: vec![c] }
    }

    fn merge(mut self, other: ClassTally) -> ClassTally {
        self.population += other.population;
        self.top.extend(other.top);
        self.top.sort_by(Candidate::rank);
        self.top.dedup_by(|a, b| a.canon == b.canon);
        self.top.truncate(2);
        self
    }
}

type Tallies = BTreeMap<(usize, usize), ClassTally>;

fn merge_tallies(mut a: Tallies, b: Tallies) -> Tallies {
    for (key, tally) in b {
        let merged = match a.remove(&key) {
            Some(existing) => existing.merge(tally),
            None => tally,
        };
        a.insert(key, merged);
    }
    a
}

fn tally_population(
    graphs: &[Graph],
    n: usize,
    measure: Measure,
    g: usize,
    r: usize,
    only: Option<(usize, usize)>,
    opts: &VerifyOptions,
) -> Result<Tallies, VerifyError> {
    if let Some(bad) = graphs.iter().find(|x| x.order() != n) {
        return Err(VerifyError::MixedOrders { expected: n, found: bad.order() });
    }
    let mut order: Vec<usize> = (0..graphs.len()).collect();
    if let Some(seed) = opts.seed {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let work = || {
        order
            .par_iter()
            .map(|&i| -> Result<Tallies, VerifyError> {
                let graph = &graphs[i];
                let mut out = Tallies::new();
                if !graph.is_connected() {
                    return Ok(out);
                }
                if let Some((delta, _)) = only {
                    if graph.min_degree() != delta {
                        return Ok(out);
                    }
                }
                let Some(key) = class_key(graph, measure, g, r)? else {
                    return Ok(out);
                };
                if only.is_some_and(|o| o != key) {
                    return Ok(out);
                }
                let rho = spectral::rho(graph)?;
                let canon = canon::canonical_form(graph)?;
                out.insert(key, ClassTally::single(Candidate { rho, canon }));
                Ok(out)
            })
            .try_reduce(Tallies::new, |a, b| Ok(merge_tallies(a, b)))
    };
    match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| VerifyError::ThreadPool(e.to_string()))?
            .install(work),
        None => work(),
    }
}

fn report(spec: ClassSpec, tally: Option<ClassTally>, runtime_ms: u64) -> Result<VerificationReport, VerifyError> {
    let tally = tally.unwrap_or_default();
    let mut warnings = Vec::new();
    let mut rep = VerificationReport {
        schema: REPORT_SCHEMA,
        class: spec,
        population: tally.population,
        best: None,
        claimed: None,
        isomorphic: false,
        second_best_rho: tally.top.get(1).map(|c| c.rho),
        runtime_ms,
        warnings: Vec::new(),
        verdict: Verdict::EmptyClass,
    };
    let Some(best) = tally.top.first() else {
        return Ok(rep);
    };
    rep.best = Some(RankedGraph { rho: best.rho, graph6: best.canon.as_str().to_string() });
    let in_hypothesis = spec.in_hypothesis();
    if !in_hypothesis {
        warnings.push(format!(
            "out of hypothesis: n={} < k + r(g+1) = {}",
            spec.n,
            families::hypothesis_bound(spec.k, spec.g, spec.r)
        ));
    }
    let claimed = families::extremal_case(spec.k, spec.delta, spec.g).and_then(|case| {
        let params = FamilyParams::new(case.family(), spec.n, spec.k, spec.delta, spec.g, spec.r);
        if in_hypothesis {
            params.check()?;
        }
        families::construct(&params)
    });
    match claimed {
        Ok(family) => {
            let rho = spectral::rho(&family.graph)?;
            let canon = canon::canonical_form(&family.graph)?;
            rep.isomorphic = canon == best.canon;
            if rho > best.rho + RHO_TOLERANCE {
                warnings.push("claimed family exceeds the class maximum".to_string());
            }
            let key = class_key(&family.graph, spec.measure, spec.g, spec.r)?;
            if key != Some((spec.delta, spec.k)) {
                warnings.push(format!("claimed graph is not in the class (its delta, k = {key:?})"));
            }
            rep.verdict = if !in_hypothesis {
                Verdict::OutOfHypothesis
            } else if rep.isomorphic && (best.rho - rho).abs() <= RHO_TOLERANCE {
                Verdict::Confirmed
            } else {
                Verdict::Refuted
            };
            rep.claimed = Some(ClaimedGraph {
                family: family.params.family,
                rho,
                graph6: graph6::encode(&family.graph),
            });
        }
        Err(e) => {
            rep.verdict = if in_hypothesis { Verdict::CoverageAnomaly } else { Verdict::OutOfHypothesis };
            warnings.push(format!("no claimed family: {e}"));
        }
    }
    rep.warnings = warnings;
    Ok(rep)
}

fn elapsed_ms(start: Instant, opts: &VerifyOptions) -> u64 {
    if opts.timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    }
}

/// Verify one class against a population covering every connected graph of
/// order `spec.n` up to isomorphism.
pub fn verify_class(spec: ClassSpec, graphs: &[Graph], opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    if !spec.in_hypothesis() && !opts.allow_out_of_hypothesis {
        return Err(VerifyError::OutOfHypothesis { n: spec.n, k: spec.k, g: spec.g, r: spec.r });
    }
    let start = Instant::now();
    let mut tallies = tally_population(graphs, spec.n, spec.measure, spec.g, spec.r, Some((spec.delta, spec.k)), opts)?;
    let tally = tallies.remove(&(spec.delta, spec.k));
    report(spec, tally, elapsed_ms(start, opts))
}

/// One report per nonempty class, ordered by `(δ, k)`. Classes below the
/// hypothesis bound are skipped unless `allow_out_of_hypothesis` is set.
pub fn verify_all_classes(
    n: usize,
    g: usize,
    r: usize,
    measure: Measure,
    graphs: &[Graph],
    opts: &VerifyOptions,
) -> Result<Vec<VerificationReport>, VerifyError> {
    let start = Instant::now();
    let tallies = tally_population(graphs, n, measure, g, r, None, opts)?;
    let mut specs = Vec::new();
    for (&(delta, k), tally) in &tallies {
        let spec = ClassSpec { n, delta, g, r, k, measure };
        if spec.in_hypothesis() || opts.allow_out_of_hypothesis {
            specs.push((spec, tally.clone()));
        }
    }
    let runtime = elapsed_ms(start, opts);
    specs.into_iter().map(|(spec, tally)| report(spec, Some(tally), runtime)).collect()
}

const CSV_HEADER: [&str; 18] = [
    "schema",
    "n",
    "delta",
    "g",
    "r",
    "k",
    "population",
    "best_rho",
    "best_graph6",
    "claimed_family",
    "claimed_rho",
    "claimed_graph6",
    "isomorphic",
    "second_best_rho",
    "runtime_ms",
    "warnings",
    "measure",
    "verdict",
];

/// Flat projection of reports, one row each.
pub fn write_csv<W: std::io::Write>(out: W, reports: &[VerificationReport]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let opt = |x: Option<String>| x.unwrap_or_default();
    for rep in reports {
        let c = &rep.class;
        w.write_record([
            rep.schema.to_string(),
            c.n.to_string(),
            c.delta.to_string(),
            c.g.to_string(),
            c.r.to_string(),
            c.k.to_string(),
            rep.population.to_string(),
            opt(rep.best.as_ref().map(|b| b.rho.to_string())),
            opt(rep.best.as_ref().map(|b| b.graph6.clone())),
            opt(rep.claimed.as_ref().map(|x| x.family.to_string())),
            opt(rep.claimed.as_ref().map(|x| x.rho.to_string())),
            opt(rep.claimed.as_ref().map(|x| x.graph6.clone())),
            rep.isomorphic.to_string(),
            opt(rep.second_best_rho.map(|x| x.to_string())),
            rep.runtime_ms.to_string(),
            rep.warnings.join("; "),
            c.measure.to_string(),
            serde_json::to_value(rep.verdict)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate;

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&Graph::cycle(6).unwrap(), 2, 1, 2).unwrap(), Some(2));
        assert_eq!(classify(&Graph::complete(5).unwrap(), 4, 1, 2).unwrap(), None);
        assert_eq!(classify(&Graph::star(5).unwrap(), 1, 1, 2).unwrap(), None);
        assert_eq!(classify(&Graph::cycle(6).unwrap(), 3, 1, 2).unwrap(), None);
    }

    #[test]
    fn tally_merge_is_order_independent() {
        let c = |rho: f64, s: &str| Candidate { rho, canon: canon::canonical_form(&graph6::decode(s).unwrap()).unwrap() };
        let a = ClassTally::single(c(2.0, "Dhc"));
        let b = ClassTally::single(c(2.0, "D~{"));
        let d = ClassTally::single(c(1.5, "D??"));
        let left = a.clone().merge(b.clone()).merge(d.clone());
        let right = d.merge(b.merge(a));
        assert_eq!(left.population, 3);
        let key = |t: &ClassTally| t.top.iter().map(|c| c.canon.clone()).collect::<Vec<_>>();
        assert_eq!(key(&left), key(&right));
    }

    #[test]
    fn empty_class_report() {
        let graphs = enumerate::connected_graphs(5).unwrap();
        let spec = ClassSpec { n: 5, delta: 4, g: 0, r: 2, k: 1, measure: Measure::Component };
        let rep = verify_class(spec, &graphs, &VerifyOptions::default()).unwrap();
        assert_eq!(rep.population, 0);
        assert_eq!(rep.verdict, Verdict::EmptyClass);
    }

    #[test]
    fn out_of_hypothesis_needs_opt_in() {
        let graphs = enumerate::connected_graphs(5).unwrap();
        let spec = ClassSpec { n: 5, delta: 2, g: 1, r: 2, k: 2, measure: Measure::Component };
        assert!(matches!(
            verify_class(spec, &graphs, &VerifyOptions::default()),
            Err(VerifyError::OutOfHypothesis { .. })
        ));
        let opts = VerifyOptions { allow_out_of_hypothesis: true, ..Default::default() };
        let rep = verify_class(spec, &graphs, &opts).unwrap();
        assert!(!rep.verdict.is_failure());
    }

    #[test]
    fn mixed_orders_rejected() {
        let graphs = vec![Graph::cycle(5).unwrap(), Graph::cycle(6).unwrap()];
        assert!(verify_all_classes(5, 0, 2, Measure::Component, &graphs, &VerifyOptions::default()).is_err());
    }
}
