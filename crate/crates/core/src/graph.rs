//! Sparsity graphs: undirected graphs over 1-based vertex indices that
//! represent the nonzero pattern of a symmetric matrix. Every off-diagonal
//! nonzero (i, j) contributes the edge {i, j}; diagonal entries carry no edge.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Nonzero pattern of an `n x n` symmetric matrix, stored both as a sorted
/// edge list and as per-vertex neighbor sets. Vertices are `1..=n`.
///
/// Immutable after construction and safe to share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<BTreeSet<usize>>,
}

impl SparsityGraph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            adj: vec![BTreeSet::new(); n + 1],
        }
    }

    /// Build a graph from matrix entry positions. Diagonal entries are
    /// dropped, symmetric duplicates collapse to a single undirected edge.
    pub fn from_entries(n: usize, entries: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(i, j) in entries {
            if i < 1 || i > n || j < 1 || j > n {
                return Err(Error::InvalidInput(format!(
                    "entry ({i}, {j}) out of range for n = {n}"
                )));
            }
            if i != j {
                set.insert((i.min(j), i.max(j)));
            }
        }
        let mut adj = vec![BTreeSet::new(); n + 1];
        for &(i, j) in &set {
            adj[i].insert(j);
            adj[j].insert(i);
        }
        Ok(Self {
            n,
            edges: set.into_iter().collect(),
            adj,
        })
    }

    /// Union of the edge sets of several patterns over the same vertex count.
    pub fn aggregate(patterns: &[SparsityGraph]) -> Result<SparsityGraph> {
        let n = match patterns.first() {
            Some(g) => g.n,
            None => return Err(Error::InvalidInput("no patterns to aggregate".into())),
        };
        let mut edges = Vec::new();
        for g in patterns {
            if g.n != n {
                return Err(Error::InvalidInput(format!(
                    "aggregate over mismatched vertex counts {} and {}",
                    n, g.n
                )));
            }
            edges.extend_from_slice(&g.edges);
        }
        Self::from_entries(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && i >= 1 && i <= self.n && self.adj[i].contains(&j)
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n + 1];
        let mut components = Vec::new();
        for start in 1..=self.n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }
}
