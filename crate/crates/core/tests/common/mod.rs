//! Shared oracles and generators for the integration suites. Everything in
//! here is deliberately independent of the library's own algorithms: clique
//! enumeration is plain Bron-Kerbosch, chordality is checked by enumerating
//! chordless cycles, and eigenvalues come from a classical (largest-pivot)
//! Jacobi iteration.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cliquemerge_core::matrix::Matrix;
use cliquemerge_core::sdpa::{SdpaEntry, SdpProblem};
use cliquemerge_core::SparsityGraph;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> String {
    let path = fixtures_dir().join(name);
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("fixture {} unreadable: {e}", path.display()))
}

pub fn all_fixture_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixtures_dir())
        .expect("fixtures directory")
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".dat-s"))
        .collect();
    names.sort();
    names
}

/// Plain Bron-Kerbosch maximal clique enumeration (no pivoting); fine for
/// the small graphs the oracle comparisons use.
pub fn bron_kerbosch(g: &SparsityGraph) -> Vec<Vec<usize>> {
    fn expand(
        g: &SparsityGraph,
        r: &mut Vec<usize>,
        mut p: BTreeSet<usize>,
        mut x: BTreeSet<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if p.is_empty() && x.is_empty() {
            let mut clique = r.clone();
            clique.sort_unstable();
            out.push(clique);
            return;
        }
        while let Some(&v) = p.iter().next() {
            let nbrs: BTreeSet<usize> = g.neighbors(v).iter().copied().collect();
            r.push(v);
            expand(
                g,
                r,
                p.intersection(&nbrs).copied().collect(),
                x.intersection(&nbrs).copied().collect(),
                out,
            );
            r.pop();
            p.remove(&v);
            x.insert(v);
        }
    }

    let mut out = Vec::new();
    let p: BTreeSet<usize> = (1..=g.n()).collect();
    expand(g, &mut Vec::new(), p, BTreeSet::new(), &mut out);
    out.sort();
    out
}

/// True if the graph contains a chordless cycle of length at least four,
/// found by depth-first path enumeration anchored at the smallest cycle
/// vertex. Exponential; for oracle use on small graphs only.
pub fn has_chordless_cycle(g: &SparsityGraph) -> bool {
    fn extend(g: &SparsityGraph, path: &mut Vec<usize>, start: usize) -> bool {
        let last = *path.last().unwrap();
        for &next in g.neighbors(last) {
            if next == start && path.len() >= 4 {
                // Cycle closed; chordless if no non-consecutive pair is adjacent.
                let k = path.len();
                let mut chord = false;
                'pairs: for i in 0..k {
                    for j in (i + 2)..k {
                        if i == 0 && j == k - 1 {
                            continue;
                        }
                        if g.has_edge(path[i], path[j]) {
                            chord = true;
                            break 'pairs;
                        }
                    }
                }
                if !chord {
                    return true;
                }
            }
            if next > start && !path.contains(&next) {
                // Prune: only extend simple paths over vertices above the anchor.
                path.push(next);
                if extend(g, path, start) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }

    for start in 1..=g.n() {
        let mut path = vec![start];
        if extend(g, &mut path, start) {
            return true;
        }
    }
    false
}

/// Random chordal graph by clique stacking: each new clique shares a random
/// subset of an existing clique and adds fresh vertices. Connected whenever
/// `n > 0`.
pub fn random_chordal(rng: &mut ChaCha8Rng, n: usize) -> SparsityGraph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    let mut next = 1usize;
    while next <= n {
        let fresh = rng.random_range(1..=3usize).min(n - next + 1);
        let new_vertices: Vec<usize> = (next..next + fresh).collect();
        next += fresh;
        let mut clique = new_vertices;
        if let Some(base) = cliques.get(rng.random_range(0..cliques.len().max(1))) {
            let keep = rng.random_range(1..=base.len());
            let mut base = base.clone();
            for _ in 0..(base.len() - keep) {
                base.remove(rng.random_range(0..base.len()));
            }
            clique.extend(base);
        }
        clique.sort_unstable();
        for (i, &a) in clique.iter().enumerate() {
            for &b in &clique[i + 1..] {
                edges.push((a, b));
            }
        }
        cliques.push(clique);
    }
    SparsityGraph::from_entries(n, &edges).unwrap()
}

/// Erdos-Renyi style random pattern.
pub fn random_gnp(rng: &mut ChaCha8Rng, n: usize, p: f64) -> SparsityGraph {
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            if rng.random_range(0.0..1.0) < p {
                edges.push((i, j));
            }
        }
    }
    SparsityGraph::from_entries(n, &edges).unwrap()
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v: f64 = rng.random_range(-1.0..1.0);
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m
}

/// Random PSD matrix built as `L * L^T` from a random square factor.
pub fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            l.set(i, j, rng.random_range(-1.0..1.0));
        }
    }
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut sum = 0.0;
            for k in 0..n {
                sum += l.get(i, k) * l.get(j, k);
            }
            m.set(i, j, sum);
        }
    }
    m
}

/// Classical Jacobi iteration (always rotates the largest off-diagonal
/// element). Slower but independent of the library's cyclic-sweep solver.
pub fn classical_jacobi(a: &Matrix) -> (Vec<f64>, Matrix) {
    assert!(a.is_square());
    let n = a.rows();
    let mut a = a.clone();
    let mut v = Matrix::identity(n);
    for _ in 0..(40 * n * n + 100) {
        let (mut p, mut q, mut best) = (0, 0, 0.0f64);
        for i in 0..n {
            for j in (i + 1)..n {
                if a.get(i, j).abs() > best {
                    best = a.get(i, j).abs();
                    p = i;
                    q = j;
                }
            }
        }
        if best < 1e-13 {
            break;
        }
        let apq = a.get(p, q);
        let theta = 0.5 * (a.get(q, q) - a.get(p, p)) / apq;
        let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
        let t = if theta == 0.0 { 1.0 } else { t };
        let c = 1.0 / (1.0 + t * t).sqrt();
        let s = t * c;
        for k in 0..n {
            let akp = a.get(k, p);
            let akq = a.get(k, q);
            a.set(k, p, c * akp - s * akq);
            a.set(k, q, s * akp + c * akq);
        }
        for k in 0..n {
            let apk = a.get(p, k);
            let aqk = a.get(q, k);
            a.set(p, k, c * apk - s * aqk);
            a.set(q, k, s * apk + c * aqk);
        }
        for k in 0..n {
            let vkp = v.get(k, p);
            let vkq = v.get(k, q);
            v.set(k, p, c * vkp - s * vkq);
            v.set(k, q, s * vkp + c * vkq);
        }
    }
    ((0..n).map(|i| a.get(i, i)).collect(), v)
}

/// Smallest eigenvalue by the oracle solver.
pub fn min_eigenvalue(m: &Matrix) -> f64 {
    let (vals, _) = classical_jacobi(m);
    vals.into_iter().fold(f64::INFINITY, f64::min)
}

/// Oracle PSD projection: clamp the oracle eigendecomposition.
pub fn oracle_psd_project(m: &Matrix) -> Matrix {
    let sym = m.symmetrized();
    let n = sym.rows();
    let (vals, v) = classical_jacobi(&sym);
    let mut out = Matrix::zeros(n, n);
    for (k, &val) in vals.iter().enumerate() {
        let lambda = val.max(0.0);
        for i in 0..n {
            for j in 0..n {
                out.add_to(i, j, lambda * v.get(i, k) * v.get(j, k));
            }
        }
    }
    out
}

/// Random SDP with one PSD block (plus sometimes a diagonal block).
pub fn random_problem(rng: &mut ChaCha8Rng) -> SdpProblem {
    let m = rng.random_range(1..=4usize);
    let n = rng.random_range(2..=6usize);
    let with_diag = rng.random_range(0.0..1.0) < 0.3;
    let mut block_structure = vec![n as i64];
    if with_diag {
        block_structure.push(-(rng.random_range(1..=3i64)));
    }
    let rhs: Vec<f64> = (0..m).map(|_| rng.random_range(-2.0..2.0)).collect();
    let mut entries = Vec::new();
    for mat in 0..=m {
        let nnz = rng.random_range(0..=4usize);
        for _ in 0..nnz {
            let i = rng.random_range(1..=n);
            let j = rng.random_range(i..=n);
            entries.push(SdpaEntry {
                matrix: mat,
                block: 1,
                row: i,
                col: j,
                value: rng.random_range(-3.0..3.0),
            });
        }
        if with_diag && rng.random_range(0.0..1.0) < 0.5 {
            let d = block_structure[1].unsigned_abs() as usize;
            let i = rng.random_range(1..=d);
            entries.push(SdpaEntry {
                matrix: mat,
                block: 2,
                row: i,
                col: i,
                value: rng.random_range(-3.0..3.0),
            });
        }
    }
    SdpProblem {
        num_constraints: m,
        block_structure,
        rhs,
        entries,
    }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
