//! Clique trees: trees over the maximal cliques satisfying the running
//! intersection property, with each non-root clique partitioned into its
//! separator (intersection with the parent) and supernode (the rest).
//!
//! Trees are built as maximum-weight spanning trees of the clique
//! intersection graph weighted by overlap cardinality. A disconnected
//! pattern yields one tree per component, attached under a synthetic root
//! with an empty clique so the result is still a single tree.

use crate::chordal::CliqueSet;
use crate::error::{Error, Result};
use crate::vset;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueNode {
    pub clique: Vec<usize>,
    pub separator: Vec<usize>,
    pub supernode: Vec<usize>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueTree {
    nodes: Vec<CliqueNode>,
    root: usize,
}

impl CliqueTree {
    pub(crate) fn from_parts(nodes: Vec<CliqueNode>, root: usize) -> Self {
        Self { nodes, root }
    }

    pub fn nodes(&self) -> &[CliqueNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, idx: usize) -> &CliqueNode {
        &self.nodes[idx]
    }

    /// The synthetic root introduced for disconnected patterns has an empty
    /// clique; every real node is nonempty.
    pub fn is_synthetic(&self, idx: usize) -> bool {
        self.nodes[idx].clique.is_empty()
    }

    /// Indices of real (non-synthetic) nodes.
    pub fn real_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| !self.is_synthetic(i))
    }

    /// Cliques of the real nodes, in node order.
    pub fn cliques(&self) -> Vec<Vec<usize>> {
        self.real_nodes()
            .map(|i| self.nodes[i].clique.clone())
            .collect()
    }

    pub fn clique_count(&self) -> usize {
        self.real_nodes().count()
    }

    pub fn max_clique_size(&self) -> usize {
        self.real_nodes()
            .map(|i| self.nodes[i].clique.len())
            .max()
            .unwrap_or(0)
    }

    /// Number of overlap equality records implied by the tree: one per
    /// upper-triangular separator entry of each non-root node.
    pub fn consistency_count(&self) -> usize {
        self.real_nodes()
            .map(|i| {
                let s = self.nodes[i].separator.len();
                s * (s + 1) / 2
            })
            .sum()
    }

    /// Path between two nodes (inclusive of endpoints).
    fn path(&self, mut a: usize, mut b: usize) -> Vec<usize> {
        let depth = |mut v: usize| {
            let mut d = 0;
            while let Some(p) = self.nodes[v].parent {
                v = p;
                d += 1;
            }
            d
        };
        let (mut da, mut db) = (depth(a), depth(b));
        let mut left = vec![a];
        let mut right = vec![b];
        while da > db {
            a = self.nodes[a].parent.unwrap();
            left.push(a);
            da -= 1;
        }
        while db > da {
            b = self.nodes[b].parent.unwrap();
            right.push(b);
            db -= 1;
        }
        while a != b {
            a = self.nodes[a].parent.unwrap();
            b = self.nodes[b].parent.unwrap();
            left.push(a);
            right.push(b);
        }
        right.pop();
        right.reverse();
        left.extend(right);
        left
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            self.parent[x] = self.find(self.parent[x]);
        }
        self.parent[x]
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        if self.rank[rx] < self.rank[ry] {
            self.parent[rx] = ry;
        } else {
            self.parent[ry] = rx;
            if self.rank[rx] == self.rank[ry] {
                self.rank[rx] += 1;
            }
        }
        true
    }
}

/// Builds a clique tree over `cliques` (assumed canonical: each sorted, list
/// sorted). Kruskal on overlap weights, ties broken toward the smallest
/// clique-index pair; each component is rooted at its largest clique
/// (smallest index on ties).
pub(crate) fn tree_from_cliques(cliques: Vec<Vec<usize>>) -> Result<CliqueTree> {
    let p = cliques.len();
    if p == 0 {
        return Err(Error::InvalidInput("empty clique set".into()));
    }

    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for i in 0..p {
        for j in (i + 1)..p {
            let w = vset::intersection_len(&cliques[i], &cliques[j]);
            if w > 0 {
                edges.push((w, i, j));
            }
        }
    }
    // Maximum weight first; equal weights by ascending (i, j).
    edges.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut uf = UnionFind::new(p);
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); p];
    for (_, i, j) in edges {
        if uf.union(i, j) {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
    }

    // Component roots: largest clique, smallest index on ties.
    let mut component_root: std::collections::BTreeMap<usize, usize> = Default::default();
    for i in 0..p {
        let rep = uf.find(i);
        let entry = component_root.entry(rep).or_insert(i);
        if cliques[i].len() > cliques[*entry].len() {
            *entry = i;
        }
    }
    let roots: Vec<usize> = component_root.values().copied().collect();

    let mut nodes: Vec<CliqueNode> = cliques
        .into_iter()
        .map(|c| CliqueNode {
            clique: c,
            separator: Vec::new(),
            supernode: Vec::new(),
            parent: None,
            children: Vec::new(),
        })
        .collect();

    let root = if roots.len() == 1 {
        roots[0]
    } else {
        nodes.push(CliqueNode {
            clique: Vec::new(),
            separator: Vec::new(),
            supernode: Vec::new(),
            parent: None,
            children: Vec::new(),
        });
        let synthetic = nodes.len() - 1;
        for &r in &roots {
            nodes[r].parent = Some(synthetic);
            nodes[synthetic].children.push(r);
        }
        synthetic
    };

    // Orient every component away from its root.
    for &r in &roots {
        let mut stack = vec![r];
        let mut seen = vec![false; p];
        seen[r] = true;
        while let Some(v) = stack.pop() {
            let mut kids: Vec<usize> = adjacency[v]
                .iter()
                .copied()
                .filter(|&u| !seen[u])
                .collect();
            kids.sort_unstable();
            for &u in &kids {
                seen[u] = true;
                nodes[u].parent = Some(v);
                stack.push(u);
            }
            nodes[v].children = kids;
        }
    }

    for i in 0..nodes.len() {
        let sep = match nodes[i].parent {
            Some(par) => vset::intersect(&nodes[i].clique, &nodes[par].clique),
            None => Vec::new(),
        };
        nodes[i].supernode = vset::difference(&nodes[i].clique, &sep);
        nodes[i].separator = sep;
    }

    Ok(CliqueTree::from_parts(nodes, root))
}

/// Clique tree of a clique set; see module docs for the construction.
pub fn build_clique_tree(cs: &CliqueSet) -> Result<CliqueTree> {
    tree_from_cliques(cs.cliques().to_vec())
}

/// Exhaustively checks the running intersection property: for every pair of
/// real nodes, their clique intersection must be contained in every clique
/// on the tree path between them.
pub fn verify_rip(t: &CliqueTree) -> bool {
    let real: Vec<usize> = t.real_nodes().collect();
    for (a_pos, &a) in real.iter().enumerate() {
        for &b in &real[a_pos + 1..] {
            let inter = vset::intersect(&t.node(a).clique, &t.node(b).clique);
            if inter.is_empty() {
                continue;
            }
            for v in t.path(a, b) {
                if !vset::is_subset(&inter, &t.node(v).clique) {
                    return false;
                }
            }
        }
    }
    true
}
