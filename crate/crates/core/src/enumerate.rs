//! Isomorphism-class enumeration of small graphs and graph6 file ingestion.

use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::canon;
use crate::graph::Graph;
use crate::graph6::{self, Graph6Error};

/// Largest order the built-in generator produces.
pub const MAX_GENERATED_ORDER: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("built-in generation supports orders 1..={MAX_GENERATED_ORDER}, got {0}; ingest a graph6 file instead")]
    OrderUnsupported(usize),
}

/// One representative of every isomorphism class of graphs on `n` vertices,
/// each in canonical labelling, sorted by graph6 string.
///
/// Generation is vertex by vertex. A graph on `m + 1` vertices arises from
/// its minimum-degree vertex deletion, so the new vertex only needs degree at
/// most every other degree; duplicates are rejected by canonical form.
pub fn all_graphs(n: usize) -> Result<Vec<Graph>, EnumError> {
    if n == 0 || n > MAX_GENERATED_ORDER {
        return Err(EnumError::OrderUnsupported(n));
    }
    let mut level = vec![Graph::empty(1).expect("order 1")];
    for m in 1..n {
        let seen: HashSet<Graph> = level
            .par_iter()
            .map(|parent| extensions(parent, m))
            .reduce(HashSet::new, |mut a, b| {
                if a.len() < b.len() {
                    return b.into_iter().chain(a).collect();
                }
                a.extend(b);
                a
            });
        level = seen.into_iter().collect();
    }
    let mut keyed: Vec<(String, Graph)> = level.into_iter().map(|g| (graph6::encode(&g), g)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, g)| g).collect())
}

fn extensions(parent: &Graph, m: usize) -> HashSet<Graph> {
    let degrees = parent.degree_profile().degrees;
    let mut out = HashSet::new();
    let mut rows = parent.rows().to_vec();
    rows.push(0);
    for mask in 0..1u64 << m {
        let new_degree = mask.count_ones() as usize;
        let min_other = (0..m)
            .map(|v| degrees[v] + (mask >> v & 1) as usize)
            .min()
            .unwrap_or(usize::MAX);
        if new_degree > min_other {
            continue;
        }
        for (v, row) in rows.iter_mut().enumerate().take(m) {
            *row = parent.rows()[v] | (mask >> v & 1) << m;
        }
        rows[m] = mask;
        let child = Graph::from_rows(&rows).expect("rows are symmetric");
        let perm = canon::search_labeling(&child);
        out.insert(child.permute_unchecked(&perm));
    }
    out
}

/// Connected representatives of order `n`, in the order of [`all_graphs`].
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>, EnumError> {
    Ok(all_graphs(n)?.into_iter().filter(Graph::is_connected).collect())
}

/// Decoded graph6 records with their 1-based line numbers.
#[derive(Debug, Default)]
pub struct Ingested {
    pub graphs: Vec<(usize, Graph)>,
    pub errors: Vec<(usize, Graph6Error)>,
}

impl Ingested {
    pub fn into_graphs(self) -> Vec<Graph> {
        self.graphs.into_iter().map(|(_, g)| g).collect()
    }
}

/// Read one record per line. Blank lines are skipped; bad records are
/// collected rather than aborting the read.
pub fn read_graph6<R: BufRead>(reader: R) -> io::Result<Ingested> {
    let mut out = Ingested::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let record = line.trim_end();
        if record.is_empty() {
            continue;
        }
        match graph6::decode(record) {
            Ok(g) => out.graphs.push((i + 1, g)),
            Err(e) => out.errors.push((i + 1, e)),
        }
    }
    Ok(out)
}

pub fn ingest_graph6(path: impl AsRef<Path>) -> io::Result<Ingested> {
    read_graph6(BufReader::new(File::open(path)?))
}

pub fn write_graph6<W: Write>(mut out: W, graphs: &[Graph]) -> io::Result<()> {
    for g in graphs {
        writeln!(out, "{}", graph6::encode(g))?;
    }
    Ok(())
}
