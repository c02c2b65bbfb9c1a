//! Reference implementations used as test oracles. They work on plain
//! boolean matrices and share no code with the library.
#![allow(dead_code, clippy::needless_range_loop)]

use specconn::graph::Graph;

pub type Matrix = Vec<Vec<bool>>;

pub fn matrix(g: &Graph) -> Matrix {
    let n = g.order();
    (0..n).map(|u| (0..n).map(|v| g.has_edge(u, v)).collect()).collect()
}

pub fn from_matrix(m: &Matrix) -> Graph {
    let mut edges = Vec::new();
    for u in 0..m.len() {
        for v in u + 1..m.len() {
            if m[u][v] {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(m.len(), &edges).unwrap()
}

/// Graph on `n` vertices whose upper-triangle pairs, in row order, are the bits of `code`.
pub fn from_code(n: usize, code: u64) -> Matrix {
    let mut m = vec![vec![false; n]; n];
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if code >> bit & 1 == 1 {
                m[u][v] = true;
                m[v][u] = true;
            }
            bit += 1;
        }
    }
    m
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut a = a.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

pub fn dense_rho(g: &Graph) -> f64 {
    let m = matrix(g);
    let a: Vec<Vec<f64>> = m.iter().map(|row| row.iter().map(|&b| b as u8 as f64).collect()).collect();
    symmetric_eigenvalues(&a).first().copied().unwrap_or(0.0).max(0.0)
}

/// Components of the graph left after deleting `removed`, by depth-first search.
pub fn components(m: &Matrix, removed: &[bool]) -> Vec<Vec<usize>> {
    let n = m.len();
    let mut seen = removed.to_vec();
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            comp.push(u);
            for v in 0..n {
                if m[u][v] && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        out.push(comp);
    }
    out
}

pub fn is_connected(m: &Matrix) -> bool {
    components(m, &vec![false; m.len()]).len() == 1
}

fn subsets_of_size(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for v in start..n {
            cur.push(v);
            if go(v + 1, n, k, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    go(0, n, k, &mut Vec::new(), f)
}

/// Least `|F|` such that `G - F` has at least `r` components, each
/// surviving vertex keeping at least `g` neighbours in `G - F`.
pub fn good_component_cut(m: &Matrix, g: usize, r: usize) -> Option<usize> {
    let n = m.len();
    for k in 0..=n {
        let found = subsets_of_size(n, k, &mut |f| {
            let mut removed = vec![false; n];
            for &v in f {
                removed[v] = true;
            }
            if removed.iter().all(|&x| x) {
                return false;
            }
            let good = (0..n).filter(|&u| !removed[u]).all(|u| (0..n).filter(|&v| !removed[v] && m[u][v]).count() >= g);
            good && components(m, &removed).len() >= r
        });
        if found {
            return Some(k);
        }
    }
    None
}

/// Classic vertex connectivity, `n - 1` for complete graphs.
pub fn vertex_connectivity(m: &Matrix) -> usize {
    let n = m.len();
    if (0..n).all(|u| (0..n).all(|v| u == v || m[u][v])) {
        return n.saturating_sub(1);
    }
    good_component_cut(m, 0, 2).unwrap()
}

/// Upper-triangle column-major bits, six per printable character.
pub fn graph6(m: &Matrix) -> String {
    let n = m.len();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(b'~');
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut bits = Vec::new();
    for v in 1..n {
        for u in 0..v {
            bits.push(m[u][v]);
        }
    }
    for chunk in bits.chunks(6) {
        let mut x = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            if b {
                x |= 1 << (5 - i);
            }
        }
        out.push(x + 63);
    }
    String::from_utf8(out).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Largest upper-triangle code over all relabellings.
pub fn brute_canonical_code(m: &Matrix, perms: &[Vec<usize>]) -> u64 {
    let n = m.len();
    let mut best = 0;
    for p in perms {
        let mut code = 0u64;
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if m[p[u]][p[v]] {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        best = best.max(code);
    }
    best
}

/// `(graphs, connected graphs)` on `n` vertices up to isomorphism, by
/// relabelling every labelled graph.
pub fn census(n: usize) -> (usize, usize) {
    let perms = permutations(n);
    let pairs = n * n.saturating_sub(1) / 2;
    let mut seen = std::collections::HashSet::new();
    let mut connected = 0;
    for code in 0..1u64 << pairs {
        let m = from_code(n, code);
        if seen.insert(brute_canonical_code(&m, &perms)) && is_connected(&m) {
            connected += 1;
        }
    }
    (seen.len(), connected)
}
