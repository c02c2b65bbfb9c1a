//! Command-line front end. [`run`] takes explicit streams so it can be driven
//! from tests.

use std::fs::File;
use std::io::{BufRead, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::connectivity::{self, CutMode, CutQuery};
use crate::enumerate;
use crate::families::{self, FamilyId, FamilyParams};
use crate::graph::Graph;
use crate::graph6;
use crate::spectral::{self, DEFAULT_TOLERANCE};
use crate::transforms::{self, RotationSpec};
use crate::verify::{self, ClassSpec, Measure, VerifyOptions};

/// Exit status when every command-level check passed.
pub const EXIT_OK: i32 = 0;
/// Usage, parse or I/O failure.
pub const EXIT_ERROR: i32 = 1;
/// A class verdict or transformation check failed.
pub const EXIT_REFUTED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "specconn", version, about = "Conditional connectivity and spectral radius of small graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral radius and Perron vector of a graph6 record (`-` reads stdin).
    Rho {
        graph: String,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Minimum cut value and certificate.
    Cut {
        graph: String,
        #[arg(long, default_value_t = 0)]
        g: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value = "full")]
        mode: CutMode,
    },
    /// Build a member of an extremal family.
    Family {
        id: FamilyId,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        g: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value_t = Emit::Graph6)]
        emit: Emit,
    },
    /// Spectral checks of graph transformations.
    #[command(subcommand)]
    Transform(TransformCommand),
    /// List connected graphs of order n, one graph6 record per line.
    Enum {
        #[arg(long)]
        n: usize,
        /// Include disconnected graphs.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare class maxima of the spectral radius against the extremal families.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Emit {
    Graph6,
    Json,
}

#[derive(Debug, Subcommand)]
enum TransformCommand {
    /// Move edges `v w` to `u w` and check that ρ grows when x(u) >= x(v).
    Rotate {
        graph: String,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        moved: Vec<usize>,
    },
    /// Delete an edge or a vertex and check that ρ drops.
    Subgraph {
        graph: String,
        /// Endpoints as `U,V`.
        #[arg(long, value_delimiter = ',', conflicts_with = "vertex")]
        edge: Option<Vec<usize>>,
        #[arg(long)]
        vertex: Option<usize>,
    },
    /// Shrink all clique parts but one to p and check that ρ grows.
    Rebalance {
        #[arg(long)]
        s: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        parts: Vec<usize>,
        #[arg(long)]
        p: usize,
    },
    /// Randomised rotation or subgraph checks.
    Fuzz {
        #[arg(long, value_enum)]
        kind: FuzzKind,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FuzzKind {
    Rotation,
    Subgraph,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    g: usize,
    #[arg(long)]
    r: usize,
    #[arg(long, requires = "k", conflicts_with = "all_classes")]
    delta: Option<usize>,
    #[arg(long, requires = "delta")]
    k: Option<usize>,
    #[arg(long, required_unless_present = "delta")]
    all_classes: bool,
    /// graph6 file covering every connected graph of order n.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, env = "SPECCONN_JOBS")]
    jobs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "component")]
    measure: Measure,
    #[arg(long)]
    allow_out_of_hypothesis: bool,
    /// Report runtime_ms as 0 so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

/// Parse `args` (including the program name) and execute. Returns the exit
/// status.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, stdin, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn execute(cmd: Command, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    match cmd {
        Command::Rho { graph, tol } => {
            let g = read_graph(&graph, stdin)?;
            let res = spectral::spectral_radius(&g, tol)?;
            writeln!(out, "{}", format_real(res.rho))?;
            let perron: Vec<String> = res.perron.iter().map(|&x| format_real(x)).collect();
            writeln!(out, "{}", perron.join(" "))?;
        }
        Command::Cut { graph, g, r, mode } => {
            let graph = read_graph(&graph, stdin)?;
            let query = CutQuery { g, r, mode };
            match connectivity::min_cut(&graph, query)? {
                Some(cut) => writeln!(out, "{}", serde_json::to_string(&cut)?)?,
                None => writeln!(out, "none")?,
            }
        }
        Command::Family { id, n, k, delta, g, r, emit } => {
            let params = FamilyParams::new(id, n, k, delta, g, r);
            let fam = families::construct(&params)?;
            match emit {
                Emit::Graph6 => writeln!(out, "{}", graph6::encode(&fam.graph))?,
                Emit::Json => {
                    let doc = json!({
                        "params": fam.params,
                        "graph6": graph6::encode(&fam.graph),
                        "witness": fam.witness,
                        "min_degree_vertex": fam.min_degree_vertex,
                        "rho": spectral::rho(&fam.graph)?,
                        "claimed_for_cell": params.check().is_ok(),
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
                }
            }
        }
        Command::Transform(t) => return transform(t, stdin, out),
        Command::Enum { n, all, out: path } => {
            let graphs = if all { enumerate::all_graphs(n)? } else { enumerate::connected_graphs(n)? };
            match path {
                Some(path) => {
                    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    let mut w = BufWriter::new(file);
                    enumerate::write_graph6(&mut w, &graphs)?;
                    w.flush()?;
                    writeln!(err, "wrote {} graphs to {}", graphs.len(), path.display())?;
                }
                None => enumerate::write_graph6(out, &graphs)?,
            }
        }
        Command::Verify(args) => return verify_cmd(args, out, err),
    }
    Ok(EXIT_OK)
}

fn transform(cmd: TransformCommand, stdin: &mut dyn BufRead, out: &mut dyn Write) -> anyhow::Result<i32> {
    let failed = match cmd {
        TransformCommand::Rotate { graph, u, v, moved } => {
            let g = read_graph(&graph, stdin)?;
            let spec = RotationSpec { u, v, moved: moved.into_iter().collect() };
            let verdict = transforms::check_rotation(&g, &spec)?;
            writeln!(out, "{}", serde_json::to_string(&verdict)?)?;
            verdict.violated()
        }
        TransformCommand::Subgraph { graph, edge, vertex } => {
            let g = read_graph(&graph, stdin)?;
            let (host, sub) = match (edge, vertex) {
                (Some(e), None) => {
                    let &[a, b] = e.as_slice() else {
                        bail!("--edge takes two vertices, got {}", e.len());
                    };
                    if a >= g.order() || b >= g.order() || !g.has_edge(a, b) {
                        bail!("{a}-{b} is not an edge");
                    }
                    (g.clone(), g.without_edge(a, b)?)
                }
                (None, Some(v)) => {
                    if v >= g.order() {
                        bail!("vertex {v} out of range");
                    }
                    // move v to the end so the rest keeps its labels
                    let last = g.order() - 1;
                    let mut perm: Vec<usize> = (0..g.order()).collect();
                    perm.swap(v, last);
                    let host = g.permute(&perm)?;
                    let sub = host.remove_vertex(last)?;
                    (host, sub)
                }
                _ => bail!("pass exactly one of --edge or --vertex"),
            };
            let verdict = transforms::check_subgraph(&host, &sub)?;
            writeln!(out, "{}", serde_json::to_string(&verdict)?)?;
            !verdict.holds
        }
        TransformCommand::Rebalance { s, parts, p } => {
            let verdict = transforms::check_join_rebalance(s, &parts, p)?;
            writeln!(out, "{}", serde_json::to_string(&verdict)?)?;
            !verdict.holds
        }
        TransformCommand::Fuzz { kind, trials, max_n, seed } => {
            let summary = match kind {
                FuzzKind::Rotation => transforms::fuzz_rotation(trials, max_n, seed)?,
                FuzzKind::Subgraph => transforms::fuzz_subgraph(trials, max_n, seed)?,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
            summary.violations > 0
        }
    };
    Ok(if failed { EXIT_REFUTED } else { EXIT_OK })
}

fn verify_cmd(args: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    let graphs: Vec<Graph> = match &args.input {
        Some(path) => {
            let ingested =
                enumerate::ingest_graph6(path).with_context(|| format!("reading {}", path.display()))?;
            for (line, e) in &ingested.errors {
                writeln!(err, "{}:{line}: skipped: {e}", path.display())?;
            }
            ingested.into_graphs()
        }
        None => enumerate::connected_graphs(args.n)?,
    };
    let opts = VerifyOptions {
        jobs: args.jobs,
        seed: args.seed,
        allow_out_of_hypothesis: args.allow_out_of_hypothesis,
        timing: !args.no_timing,
    };
    let reports = match (args.delta, args.k) {
        (Some(delta), Some(k)) => {
            let spec = ClassSpec { n: args.n, delta, g: args.g, r: args.r, k, measure: args.measure };
            vec![verify::verify_class(spec, &graphs, &opts)?]
        }
        _ => verify::verify_all_classes(args.n, args.g, args.r, args.measure, &graphs, &opts)?,
    };
    let text = serde_json::to_string_pretty(&reports)? + "\n";
    match &args.json {
        Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => out.write_all(text.as_bytes())?,
    }
    if let Some(path) = &args.csv {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        verify::write_csv(file, &reports)?;
    }
    let failures = reports.iter().filter(|r| r.verdict.is_failure()).count();
    for rep in reports.iter().filter(|r| r.verdict.is_failure()) {
        let c = &rep.class;
        writeln!(err, "class n={} delta={} g={} r={} k={}: {:?}", c.n, c.delta, c.g, c.r, c.k, rep.verdict)?;
    }
    writeln!(err, "{} classes, {} failing", reports.len(), failures)?;
    Ok(if failures > 0 { EXIT_REFUTED } else { EXIT_OK })
}

fn read_graph(arg: &str, stdin: &mut dyn BufRead) -> anyhow::Result<Graph> {
    let record = if arg == "-" {
        let mut line = String::new();
        stdin.read_line(&mut line).context("reading stdin")?;
        line.trim().to_string()
    } else {
        arg.to_string()
    };
    graph6::decode(&record).with_context(|| format!("decoding `{record}`"))
}

/// Twelve decimals with trailing zeros dropped, keeping one digit after the
/// point.
pub fn format_real(x: f64) -> String {
    let mut s = format!("{x:.12}");
    while s.ends_with('0') && !s.ends_with(".0") {
        s.pop();
    }
    if s == "-0.0" {
        s = "0.0".into();
    }
    s
}
