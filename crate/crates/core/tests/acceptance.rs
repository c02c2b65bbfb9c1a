//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specconn::connectivity::{connectivity, min_cut, vertex_connectivity, CutQuery};
use specconn::enumerate::connected_graphs;
use specconn::families::{construct, FamilyId, FamilyParams};
use specconn::graph::Graph;
use specconn::spectral::{quotient_spectral_radius, rho, spectral_radius, CliqueJoinShape, DEFAULT_TOLERANCE};
use specconn::transforms::{check_join_rebalance, fuzz_rotation, fuzz_subgraph, join_rebalance_grid, STRICT_MARGIN};
use specconn::verify::{verify_all_classes, Measure, VerificationReport, VerifyOptions, RHO_TOLERANCE};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn class_sweep(n: usize, g: usize, r: usize, measure: Measure) -> Result<(usize, Vec<VerificationReport>), String> {
    let graphs = connected_graphs(n).map_err(|e| e.to_string())?;
    let opts = VerifyOptions { timing: false, ..Default::default() };
    let reports = verify_all_classes(n, g, r, measure, &graphs, &opts).map_err(|e| e.to_string())?;
    Ok((graphs.len(), reports))
}

fn check_reports(reports: &[VerificationReport]) -> Vec<String> {
    let mut bad = Vec::new();
    for rep in reports {
        let c = &rep.class;
        let ok = match (&rep.best, &rep.claimed) {
            (Some(best), Some(claimed)) => rep.isomorphic && (best.rho - claimed.rho).abs() <= RHO_TOLERANCE,
            _ => false,
        };
        if !ok {
            bad.push(format!("(n={}, delta={}, k={}): {:?} {:?}", c.n, c.delta, c.k, rep.verdict, rep.warnings));
        }
    }
    bad
}

fn class_slice(cells: &[(usize, usize, usize, Measure)]) -> Outcome {
    let mut classes = 0;
    let mut bad = Vec::new();
    for &(n, g, r, measure) in cells {
        let (census, reports) = class_sweep(n, g, r, measure)?;
        let population: usize = reports.iter().map(|r| r.population).sum();
        if population > census {
            bad.push(format!("n={n}: class populations {population} exceed census {census}"));
        }
        classes += reports.len();
        bad.extend(check_reports(&reports));
    }
    if bad.is_empty() {
        Ok(format!("{classes} classes confirmed"))
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_1() -> Outcome {
    class_slice(&[(6, 0, 2, Measure::Component), (7, 0, 2, Measure::Component)])
}

fn criterion_2() -> Outcome {
    let (census, _) = class_sweep(8, 1, 2, Measure::Component)?;
    if census != 11117 {
        return Err(format!("census has {census} graphs, expected 11117"));
    }
    class_slice(&[(8, 1, 2, Measure::Component)])
}

fn criterion_3() -> Outcome {
    class_slice(&[(8, 1, 2, Measure::Neighbor)])
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    for n in 2..=7 {
        for g in connected_graphs(n).map_err(|e| e.to_string())? {
            if g.is_complete() {
                continue;
            }
            let full = connectivity(&g, CutQuery::full(0, 2)).map_err(|e| e.to_string())?;
            let kappa = vertex_connectivity(&g).map_err(|e| e.to_string())?;
            if full != Some(kappa) {
                return Err(format!("{g:?}: {full:?} vs {kappa}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} graphs"))
}

fn criterion_5() -> Outcome {
    let s = fuzz_rotation(1000, 10, 0x5eed).map_err(|e| e.to_string())?;
    if s.checked != 1000 || s.violations != 0 {
        return Err(format!("{} checked, {} violations, first {:?}", s.checked, s.violations, s.first_violation));
    }
    Ok(format!(
        "1000 rotations, min increase {:.3e}, {} disconnected results",
        s.min_margin, s.disconnected_results
    ))
}

fn criterion_6() -> Outcome {
    let s = fuzz_subgraph(1000, 10, 0x5eed).map_err(|e| e.to_string())?;
    if s.checked != 2000 || s.violations != 0 || s.min_margin <= STRICT_MARGIN {
        return Err(format!("{} checked, {} violations, margin {:e}", s.checked, s.violations, s.min_margin));
    }
    Ok(format!("1000 edge + 1000 vertex deletions, min decrease {:.3e}", s.min_margin))
}

fn criterion_7() -> Outcome {
    let grid = join_rebalance_grid(3, 3, 12);
    let mut min_margin = f64::INFINITY;
    for (s, parts, p) in &grid {
        let v = check_join_rebalance(*s, parts, *p).map_err(|e| e.to_string())?;
        min_margin = min_margin.min(v.rho_balanced - v.rho_parts);
        if !v.holds {
            return Err(format!("s={s} parts={parts:?} p={p}: {} vs {}", v.rho_parts, v.rho_balanced));
        }
    }
    if grid.len() < 30 {
        return Err(format!("only {} instances", grid.len()));
    }
    Ok(format!("{} instances, min margin {:.3e}", grid.len(), min_margin))
}

fn criterion_8() -> Outcome {
    for n in 2..=50 {
        let r = rho(&Graph::complete(n).unwrap()).map_err(|e| e.to_string())?;
        if (r - (n - 1) as f64).abs() > 1e-10 {
            return Err(format!("K_{n}: {r}"));
        }
    }
    let mut shapes = 0;
    'outer: for core in 1..=4 {
        for a in 1..=5 {
            for b in 1..=a {
                for c in 0..=b.min(2) {
                    let mut parts = vec![a, b];
                    if c > 0 {
                        parts.push(c);
                    }
                    let shape = CliqueJoinShape::new(core, parts.clone()).map_err(|e| e.to_string())?;
                    let q = quotient_spectral_radius(&shape).map_err(|e| e.to_string())?;
                    let dense = rho(&shape.graph().unwrap()).map_err(|e| e.to_string())?;
                    if (q - dense).abs() > 1e-9 {
                        return Err(format!("core={core} parts={parts:?}: {q} vs {dense}"));
                    }
                    shapes += 1;
                    if shapes == 50 {
                        break 'outer;
                    }
                }
            }
        }
    }
    if shapes < 50 {
        return Err(format!("only {shapes} shapes"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut regular = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=16);
        let g = Graph::random_connected(n, rng.gen_range(0.05..0.95), &mut rng).unwrap();
        let r = spectral_radius(&g, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?.rho;
        let p = g.degree_profile();
        if r < p.min as f64 - 1e-9 || r > p.max as f64 + 1e-9 {
            return Err(format!("{g:?}: rho {r} outside [{}, {}]", p.min, p.max));
        }
        if ((r - p.max as f64).abs() <= 1e-9) != g.is_regular() {
            return Err(format!("{g:?}: rho {r}, max degree {}, regular {}", p.max, g.is_regular()));
        }
        regular += g.is_regular() as usize;
    }
    Ok(format!("K_2..K_50, {shapes} shapes, 1000 random graphs ({regular} regular)"))
}

fn criterion_9() -> Outcome {
    let mut comparisons = 0;
    for n in 2..=7 {
        for graph in connected_graphs(n).map_err(|e| e.to_string())? {
            let value = |q| connectivity(&graph, q).unwrap();
            for g in 0..=1 {
                for r in 2..=3 {
                    let base = value(CutQuery::full(g, r));
                    let pairs = [
                        (base, value(CutQuery::full(g, r + 1)), "r"),
                        (base, value(CutQuery::full(g + 1, r)), "g"),
                        (value(CutQuery::neighbor(g)), base, "neighbor"),
                    ];
                    for (lo, hi, what) in pairs {
                        if let (Some(lo), Some(hi)) = (lo, hi) {
                            comparisons += 1;
                            if lo > hi {
                                return Err(format!("{graph:?} g={g} r={r} ({what}): {lo} > {hi}"));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{comparisons} comparisons"))
}

fn criterion_10() -> Outcome {
    let mut checked = 0;
    for family in FamilyId::ALL {
        for n in 2..=10 {
            for k in 1..n {
                for delta in 1..n {
                    for g in 0..=3 {
                        for r in 2..=4 {
                            let p = FamilyParams::new(family, n, k, delta, g, r);
                            if p.check().is_err() {
                                continue;
                            }
                            let f = construct(&p).map_err(|e| e.to_string())?;
                            let cut = min_cut(&f.graph, CutQuery::full(g, r)).map_err(|e| e.to_string())?;
                            if f.graph.min_degree() != delta || cut.map(|c| c.value) != Some(k) {
                                return Err(format!("{p:?}: min degree {}", f.graph.min_degree()));
                            }
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{checked} parameter sets"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("class maxima, g=0, n=6,7", criterion_1),
        ("class maxima, g=1, n=8", criterion_2),
        ("neighbor-cut class maxima, g=1, n=8", criterion_3),
        ("component cut with g=0, r=2 equals vertex connectivity", criterion_4),
        ("edge rotation raises rho", criterion_5),
        ("proper subgraphs lower rho", criterion_6),
        ("clique-join rebalancing raises rho", criterion_7),
        ("spectral exactness", criterion_8),
        ("connectivity monotonicity", criterion_9),
        ("family self-verification", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
