//! Chordality machinery: maximum cardinality search, perfect elimination
//! checks, chordal extension by symbolic elimination under a fill-reducing
//! ordering, and maximal clique enumeration for chordal graphs.

use std::collections::BTreeSet;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::SparsityGraph;
use crate::vset;

/// An elimination ordering: `order[k]` is the vertex eliminated at step `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationOrdering {
    order: Vec<usize>,
}

impl EliminationOrdering {
    /// Validates that `order` is a permutation of `1..=n` for `n = order.len()`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n + 1];
        for &v in &order {
            if v < 1 || v > n || seen[v] {
                return Err(Error::InvalidInput(format!(
                    "ordering is not a permutation of 1..={n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Inverse permutation: `positions()[v]` is the elimination step of
    /// vertex `v` (0-based). Index 0 is unused.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len() + 1];
        for (k, &v) in self.order.iter().enumerate() {
            pos[v] = k;
        }
        pos
    }
}

/// Fill-reducing ordering heuristics for the chordal extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingHeuristic {
    /// Eliminate vertices in index order.
    Natural,
    /// Exact minimum degree on the elimination graph; smallest vertex id
    /// breaks ties.
    MinDegree,
    /// Approximate minimum degree: degree estimates of the pivot's neighbors
    /// are bumped by a clique-size bound instead of being recomputed.
    Amd,
}

impl FromStr for OrderingHeuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "natural" => Ok(Self::Natural),
            "min-degree" => Ok(Self::MinDegree),
            "amd" => Ok(Self::Amd),
            other => Err(Error::InvalidInput(format!(
                "unknown ordering heuristic '{other}' (expected natural, min-degree, or amd)"
            ))),
        }
    }
}

/// The maximal cliques of a chordal graph, each a sorted vertex list; the
/// list itself is sorted lexicographically so clique indices are canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueSet {
    n: usize,
    cliques: Vec<Vec<usize>>,
}

impl CliqueSet {
    pub fn new(n: usize, cliques: Vec<Vec<usize>>) -> Result<Self> {
        let mut sorted: Vec<Vec<usize>> = Vec::with_capacity(cliques.len());
        for mut c in cliques {
            if c.is_empty() {
                return Err(Error::InvalidInput("empty clique".into()));
            }
            c.sort_unstable();
            c.dedup();
            if *c.last().unwrap() > n || c[0] < 1 {
                return Err(Error::InvalidInput(format!(
                    "clique {c:?} out of range for n = {n}"
                )));
            }
            sorted.push(c);
        }
        sorted.sort();
        sorted.dedup();
        Ok(Self { n, cliques: sorted })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn max_clique_size(&self) -> usize {
        self.cliques.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// True if no clique is contained in another.
    pub fn is_inclusion_free(&self) -> bool {
        for (i, a) in self.cliques.iter().enumerate() {
            for (j, b) in self.cliques.iter().enumerate() {
                if i != j && vset::is_subset(a, b) {
                    return false;
                }
            }
        }
        true
    }
}

/// Maximum cardinality search. The returned ordering eliminates vertices in
/// reverse visit order; for a chordal graph this is a perfect elimination
/// ordering. Ties are broken toward the smallest vertex id.
pub fn maximum_cardinality_search(g: &SparsityGraph) -> EliminationOrdering {
    let n = g.n();
    let mut weight = vec![0usize; n + 1];
    let mut visited = vec![false; n + 1];
    // (weight, Reverse-ish ordering by smallest id) via BTreeSet of
    // (weight, vertex): take the max weight, min vertex.
    let mut visit = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best = 0;
        let mut best_w = 0;
        for v in 1..=n {
            if !visited[v] && (best == 0 || weight[v] > best_w) {
                best = v;
                best_w = weight[v];
            }
        }
        visited[best] = true;
        visit.push(best);
        for &u in g.neighbors(best) {
            if !visited[u] {
                weight[u] += 1;
            }
        }
    }
    visit.reverse();
    EliminationOrdering::new(visit).expect("MCS produces a permutation")
}

/// Checks whether `ord` is a perfect elimination ordering of `g`: for every
/// vertex, its neighbors eliminated later must form a clique. Uses the
/// follower test, which is equivalent and avoids quadratic pair checks.
pub fn is_perfect_elimination(g: &SparsityGraph, ord: &EliminationOrdering) -> bool {
    if ord.len() != g.n() {
        return false;
    }
    let pos = ord.positions();
    for &v in ord.order() {
        let later: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| pos[u] > pos[v])
            .collect();
        let Some(&f) = later.iter().min_by_key(|&&u| pos[u]) else {
            continue;
        };
        for &u in &later {
            if u != f && !g.has_edge(f, u) {
                return false;
            }
        }
    }
    true
}

/// True iff `g` is chordal, decided by MCS followed by a zero-fill check.
pub fn is_chordal(g: &SparsityGraph) -> bool {
    is_perfect_elimination(g, &maximum_cardinality_search(g))
}

/// Fill edges created by symbolic elimination of `g` in the given order:
/// eliminating a vertex pairwise-connects its not-yet-eliminated neighbors.
pub fn simulate_fill(g: &SparsityGraph, ord: &EliminationOrdering) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut adj: Vec<BTreeSet<usize>> = std::iter::once(BTreeSet::new())
        .chain((1..=n).map(|v| g.neighbors(v).clone()))
        .collect();
    let mut eliminated = vec![false; n + 1];
    let mut fill = Vec::new();
    for &v in ord.order() {
        let nbrs: Vec<usize> = adj[v].iter().copied().filter(|&u| !eliminated[u]).collect();
        for (k, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[k + 1..] {
                if !adj[a].contains(&b) {
                    adj[a].insert(b);
                    adj[b].insert(a);
                    fill.push((a.min(b), a.max(b)));
                }
            }
        }
        eliminated[v] = true;
    }
    fill.sort_unstable();
    fill
}

fn natural_ordering(n: usize) -> EliminationOrdering {
    EliminationOrdering::new((1..=n).collect()).unwrap()
}

/// Exact minimum degree if `approximate` is false; otherwise the cheaper
/// variant that only bumps degree estimates of the pivot's neighbors.
fn min_degree_ordering(g: &SparsityGraph, approximate: bool) -> EliminationOrdering {
    let n = g.n();
    let mut adj: Vec<BTreeSet<usize>> = std::iter::once(BTreeSet::new())
        .chain((1..=n).map(|v| g.neighbors(v).clone()))
        .collect();
    // (degree estimate, vertex) so that ties break toward the smaller id.
    let mut rank: BTreeSet<(usize, usize)> = (1..=n).map(|v| (adj[v].len(), v)).collect();
    let mut deg: Vec<usize> = (0..=n).map(|v| if v == 0 { 0 } else { adj[v].len() }).collect();
    let mut order = Vec::with_capacity(n);
    let mut remaining = n;

    while let Some(&(_, v)) = rank.iter().next() {
        rank.remove(&(deg[v], v));
        order.push(v);
        remaining -= 1;
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();

        if approximate {
            let bound = nbrs.len().saturating_sub(2);
            for &u in &nbrs {
                adj[u].remove(&v);
                rank.remove(&(deg[u], u));
                deg[u] = (deg[u] + bound).min(remaining.saturating_sub(1));
                rank.insert((deg[u], u));
            }
            for (k, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[k + 1..] {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
        } else {
            for (k, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[k + 1..] {
                    if !adj[a].contains(&b) {
                        adj[a].insert(b);
                        adj[b].insert(a);
                    }
                }
            }
            for &u in &nbrs {
                adj[u].remove(&v);
            }
            for &u in &nbrs {
                rank.remove(&(deg[u], u));
                deg[u] = adj[u].len();
                rank.insert((deg[u], u));
            }
        }
        adj[v].clear();
    }
    EliminationOrdering::new(order).expect("elimination visits every vertex once")
}

/// Chordal extension of `g`: symbolic elimination in the heuristic's order
/// determines the fill edges; the extended graph contains `g`, is chordal,
/// and the returned ordering is a perfect elimination ordering for it.
pub fn chordal_extension(
    g: &SparsityGraph,
    heuristic: OrderingHeuristic,
) -> Result<(SparsityGraph, EliminationOrdering)> {
    let ord = match heuristic {
        OrderingHeuristic::Natural => natural_ordering(g.n()),
        OrderingHeuristic::MinDegree => min_degree_ordering(g, false),
        OrderingHeuristic::Amd => min_degree_ordering(g, true),
    };
    let fill = simulate_fill(g, &ord);
    let mut entries: Vec<(usize, usize)> = g.edges().to_vec();
    entries.extend_from_slice(&fill);
    let extended = SparsityGraph::from_entries(g.n(), &entries)?;
    debug_assert!(is_perfect_elimination(&extended, &ord));
    Ok((extended, ord))
}

/// Maximal cliques of a chordal graph given a perfect elimination ordering.
///
/// Each vertex `v` yields the candidate `{v} ∪ madj(v)` (its later
/// neighbors); a candidate is non-maximal exactly when some vertex whose
/// elimination-tree parent is `v` has a later neighborhood one larger, which
/// means the child candidate swallows it. Isolated vertices yield singleton
/// cliques, so every vertex is covered.
pub fn maximal_cliques(g: &SparsityGraph, ord: &EliminationOrdering) -> Result<CliqueSet> {
    if ord.len() != g.n() {
        return Err(Error::Precondition(format!(
            "ordering length {} does not match vertex count {}",
            ord.len(),
            g.n()
        )));
    }
    if !is_perfect_elimination(g, ord) {
        return Err(Error::Precondition(
            "ordering is not a perfect elimination ordering (elimination would create fill)"
                .into(),
        ));
    }
    let n = g.n();
    let pos = ord.positions();
    let mut madj: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for v in 1..=n {
        madj[v] = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| pos[u] > pos[v])
            .collect();
    }
    let mut maximal = vec![true; n + 1];
    for v in 1..=n {
        if let Some(&p) = madj[v].iter().min_by_key(|&&u| pos[u]) {
            if madj[v].len() == madj[p].len() + 1 {
                maximal[p] = false;
            }
        }
    }
    let cliques: Vec<Vec<usize>> = (1..=n)
        .filter(|&v| maximal[v])
        .map(|v| {
            let mut c = madj[v].clone();
            c.push(v);
            c.sort_unstable();
            c
        })
        .collect();
    CliqueSet::new(n, cliques)
}
