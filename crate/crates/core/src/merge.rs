//! Clique merging strategies.
//!
//! Three strategies shape an initial clique decomposition:
//!
//! * [`parent_child_merge`] walks the clique tree depth-first and merges a
//!   clique into its parent when the induced fill or the supernode sizes
//!   stay below fixed thresholds.
//! * [`traversal_merge`] walks the clique tree depth-first and, at every
//!   node, merges child pairs (and possibly the node itself) whose relative
//!   overlap passes a ratio test, then merges qualifying children into the
//!   node.
//! * [`clique_graph_merge`] works on the clique intersection graph instead
//!   of the tree: every overlapping pair is a candidate, each edge carries a
//!   weight from an injected weighting function, and the heaviest positive
//!   edge is merged until only non-positive edges remain. A clique tree for
//!   the merged set is recovered afterwards with [`recompute_clique_tree`].
//!
//! All strategies share one merge primitive ([`merge_cliques`]) and emit a
//! [`MergeLog`] whose replay reproduces the final clique set.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt::Write as _;

use crate::chordal::CliqueSet;
use crate::error::{Error, Result};
use crate::tree::{tree_from_cliques, CliqueNode, CliqueTree};
use crate::vset;

/// Clique intersection graph: cliques as vertices, an edge for every pair
/// with nonempty overlap, and an optional weight per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueGraph {
    cliques: Vec<Vec<usize>>,
    edges: BTreeSet<(usize, usize)>,
    weights: BTreeMap<(usize, usize), f64>,
}

impl CliqueGraph {
    /// Builds the intersection graph over a canonical (sorted) clique list.
    pub fn from_cliques(cliques: Vec<Vec<usize>>) -> Self {
        let mut cliques: Vec<Vec<usize>> = cliques
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        cliques.sort();
        let mut edges = BTreeSet::new();
        for i in 0..cliques.len() {
            for j in (i + 1)..cliques.len() {
                if vset::intersection_len(&cliques[i], &cliques[j]) > 0 {
                    edges.insert((i, j));
                }
            }
        }
        Self {
            cliques,
            edges,
            weights: BTreeMap::new(),
        }
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<f64> {
        self.weights.get(&(i.min(j), i.max(j))).copied()
    }

    pub fn weights(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.weights
    }

    /// Assigns `weight_fn` to every edge.
    pub fn apply_weights<F: Fn(&[usize], &[usize]) -> f64>(&mut self, weight_fn: F) {
        self.weights = self
            .edges
            .iter()
            .map(|&(i, j)| ((i, j), weight_fn(&self.cliques[i], &self.cliques[j])))
            .collect();
    }

    pub fn max_weight(&self) -> Option<f64> {
        self.weights.values().copied().reduce(f64::max)
    }
}

/// Intersection graph of a clique set, weights unset.
pub fn build_clique_graph(cs: &CliqueSet) -> CliqueGraph {
    CliqueGraph::from_cliques(cs.cliques().to_vec())
}

/// Thresholds for [`parent_child_merge`]: a clique merges into its parent if
/// the fill product `(|par| - |sep|) * (|clique| - |sep|)` is at most
/// `t_fill`, or both supernodes have at most `t_size` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParentChildParams {
    pub t_fill: usize,
    pub t_size: usize,
}

impl Default for ParentChildParams {
    fn default() -> Self {
        Self { t_fill: 9, t_size: 9 }
    }
}

/// Overlap-ratio threshold for [`traversal_merge`]; must lie in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraversalParams {
    sigma: f64,
}

impl TraversalParams {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "sigma must lie in (0, 1], got {sigma}"
            )));
        }
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

impl Default for TraversalParams {
    fn default() -> Self {
        Self { sigma: 0.4 }
    }
}

/// One executed merge: the cliques that were combined, the result, and the
/// weight or criterion value that triggered the merge.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeRecord {
    pub merged: Vec<Vec<usize>>,
    pub result: Vec<usize>,
    pub value: f64,
}

/// Ordered record of the merges a strategy performed.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeLog {
    pub strategy: String,
    pub notes: Vec<String>,
    pub records: Vec<MergeRecord>,
}

impl MergeLog {
    fn new(strategy: &str) -> Self {
        Self {
            strategy: strategy.to_string(),
            notes: Vec::new(),
            records: Vec::new(),
        }
    }

    /// Line-oriented text form: `#` header lines, then one line per merge.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# cliquemerge merge log v1").unwrap();
        writeln!(out, "# strategy={}", self.strategy).unwrap();
        for note in &self.notes {
            writeln!(out, "# {note}").unwrap();
        }
        for (k, rec) in self.records.iter().enumerate() {
            let parts: Vec<String> = rec.merged.iter().map(|c| format_clique(c)).collect();
            writeln!(
                out,
                "step {}: merge {} -> {} weight={}",
                k + 1,
                parts.join(" + "),
                format_clique(&rec.result),
                rec.value
            )
            .unwrap();
        }
        out
    }

    /// Applies the recorded merges to `initial`, returning the final clique
    /// list. Fails if a recorded clique is absent at its step.
    pub fn replay(&self, initial: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
        let mut pool: Vec<Vec<usize>> = initial.to_vec();
        for (k, rec) in self.records.iter().enumerate() {
            for m in &rec.merged {
                let idx = pool.iter().position(|c| c == m).ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "replay step {}: clique {m:?} not present",
                        k + 1
                    ))
                })?;
                pool.swap_remove(idx);
            }
            pool.push(rec.result.clone());
        }
        pool.sort();
        Ok(pool)
    }
}

fn format_clique(c: &[usize]) -> String {
    let inner: Vec<String> = c.iter().map(usize::to_string).collect();
    format!("[{}]", inner.join(", "))
}

/// Reduced clique list, rewritten edge set, and the merged clique.
pub type MergeOutcome = (Vec<Vec<usize>>, BTreeSet<(usize, usize)>, Vec<usize>);

/// Merges the cliques indexed by `to_merge` into their union.
///
/// Returns the reduced clique list (survivors in order, the merged clique
/// appended last), the rewritten edge set over the new indices, and the
/// merged clique itself. Edges internal to the merged set vanish; external
/// edges are redirected to the merged clique with duplicates collapsed.
pub fn merge_cliques(
    cliques: &[Vec<usize>],
    edges: &BTreeSet<(usize, usize)>,
    to_merge: &BTreeSet<usize>,
) -> Result<MergeOutcome> {
    if to_merge.is_empty() {
        return Err(Error::InvalidInput("no cliques selected for merge".into()));
    }
    if to_merge.iter().any(|&i| i >= cliques.len()) {
        return Err(Error::InvalidInput("merge index out of range".into()));
    }

    let mut merged = Vec::new();
    for &i in to_merge {
        merged = vset::union(&merged, &cliques[i]);
    }

    // New index for every survivor; the merged clique goes last.
    let mut remap = vec![usize::MAX; cliques.len()];
    let mut new_cliques = Vec::with_capacity(cliques.len() - to_merge.len() + 1);
    for (i, c) in cliques.iter().enumerate() {
        if !to_merge.contains(&i) {
            remap[i] = new_cliques.len();
            new_cliques.push(c.clone());
        }
    }
    let merged_idx = new_cliques.len();
    new_cliques.push(merged.clone());

    let mut new_edges = BTreeSet::new();
    for &(i, j) in edges {
        let a = if to_merge.contains(&i) { merged_idx } else { remap[i] };
        let b = if to_merge.contains(&j) { merged_idx } else { remap[j] };
        if a != b {
            new_edges.insert((a.min(b), a.max(b)));
        }
    }

    Ok((new_cliques, new_edges, merged))
}

// ---------------------------------------------------------------------------
// Clique graph strategy
// ---------------------------------------------------------------------------

/// Heap entry for edge selection: heaviest weight first; among equal
/// weights the edge whose sorted pair of smallest clique members is
/// lexicographically least, then the smallest slot pair.
struct Candidate {
    weight: f64,
    tie: (usize, usize),
    pair: (usize, usize),
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then_with(|| other.tie.cmp(&self.tie))
            .then_with(|| other.pair.cmp(&self.pair))
    }
}

fn tie_key(a: &[usize], b: &[usize]) -> (usize, usize) {
    let ma = *a.first().unwrap_or(&usize::MAX);
    let mb = *b.first().unwrap_or(&usize::MAX);
    (ma.min(mb), ma.max(mb))
}

/// Greedy clique-graph merging: repeatedly merge the maximum-weight edge
/// while that weight is positive, re-evaluating the weights of every edge
/// incident to the merged clique. Stale heap entries are skipped lazily.
///
/// On return every remaining edge weight is non-positive. The input graph
/// does not need weights applied; `weight_fn` is evaluated as needed.
pub fn clique_graph_merge<F>(cg: &CliqueGraph, weight_fn: F) -> (CliqueGraph, MergeLog)
where
    F: Fn(&[usize], &[usize]) -> f64,
{
    // Slot arena: merged cliques get fresh slots, dead slots stay behind.
    let mut cliques: Vec<Option<Vec<usize>>> =
        cg.cliques.iter().cloned().map(Some).collect();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cliques.len()];
    let mut weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut heap = BinaryHeap::new();

    let clique = |cliques: &[Option<Vec<usize>>], i: usize| -> Vec<usize> {
        cliques[i].as_ref().expect("live slot").clone()
    };

    for &(i, j) in &cg.edges {
        let w = weight_fn(&clique(&cliques, i), &clique(&cliques, j));
        adj[i].insert(j);
        adj[j].insert(i);
        weights.insert((i, j), w);
        heap.push(Candidate {
            weight: w,
            tie: tie_key(&clique(&cliques, i), &clique(&cliques, j)),
            pair: (i, j),
        });
    }

    let mut log = MergeLog::new("clique-graph");

    while let Some(cand) = heap.pop() {
        let (i, j) = cand.pair;
        match weights.get(&(i, j)) {
            Some(&w) if w == cand.weight => {}
            _ => continue, // stale entry
        }
        if cand.weight <= 0.0 {
            break;
        }

        let ci = clique(&cliques, i);
        let cj = clique(&cliques, j);
        let merged = vset::union(&ci, &cj);

        let m = cliques.len();
        cliques.push(Some(merged.clone()));
        adj.push(BTreeSet::new());

        let mut neighbors: BTreeSet<usize> = adj[i].union(&adj[j]).copied().collect();
        neighbors.remove(&i);
        neighbors.remove(&j);

        for &k in &neighbors {
            weights.remove(&(i.min(k), i.max(k)));
            weights.remove(&(j.min(k), j.max(k)));
            adj[k].remove(&i);
            adj[k].remove(&j);

            let ck = clique(&cliques, k);
            let w = weight_fn(&merged, &ck);
            let key = (k.min(m), k.max(m));
            weights.insert(key, w);
            adj[k].insert(m);
            adj[m].insert(k);
            heap.push(Candidate {
                weight: w,
                tie: tie_key(&merged, &ck),
                pair: key,
            });
        }
        weights.remove(&(i, j));
        adj[i].clear();
        adj[j].clear();
        cliques[i] = None;
        cliques[j] = None;

        log.records.push(MergeRecord {
            merged: vec![ci, cj],
            result: merged,
            value: cand.weight,
        });
    }

    debug_assert!(weights.values().all(|&w| w <= 0.0));

    // Compact live slots into a canonical clique graph.
    let mut live: Vec<(Vec<usize>, usize)> = cliques
        .iter()
        .enumerate()
        .filter_map(|(slot, c)| c.as_ref().map(|c| (c.clone(), slot)))
        .collect();
    live.sort();
    let mut slot_to_new = BTreeMap::new();
    for (new_idx, (_, slot)) in live.iter().enumerate() {
        slot_to_new.insert(*slot, new_idx);
    }
    let mut out = CliqueGraph {
        cliques: live.iter().map(|(c, _)| c.clone()).collect(),
        edges: BTreeSet::new(),
        weights: BTreeMap::new(),
    };
    for (&(i, j), &w) in &weights {
        let a = slot_to_new[&i];
        let b = slot_to_new[&j];
        let key = (a.min(b), a.max(b));
        out.edges.insert(key);
        out.weights.insert(key, w);
    }
    (out, log)
}

/// Rebuilds a clique tree from a (typically post-merge) clique graph:
/// edges are re-weighted by overlap cardinality and a maximum-weight
/// spanning tree is extracted, rooted at the largest clique.
pub fn recompute_clique_tree(cg: &CliqueGraph) -> Result<CliqueTree> {
    tree_from_cliques(cg.cliques.clone())
}

// ---------------------------------------------------------------------------
// Tree strategies
// ---------------------------------------------------------------------------

/// Mutable working copy of a clique tree for the in-place strategies.
struct Arena {
    cliques: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    alive: Vec<bool>,
    root: usize,
    synthetic: Vec<bool>,
}

impl Arena {
    fn from_tree(t: &CliqueTree) -> Self {
        let nodes = t.nodes();
        Self {
            cliques: nodes.iter().map(|n| n.clique.clone()).collect(),
            parent: nodes.iter().map(|n| n.parent).collect(),
            children: nodes.iter().map(|n| n.children.clone()).collect(),
            alive: vec![true; nodes.len()],
            root: t.root(),
            synthetic: (0..nodes.len()).map(|i| t.is_synthetic(i)).collect(),
        }
    }

    fn separator(&self, id: usize) -> Vec<usize> {
        match self.parent[id] {
            Some(p) => vset::intersect(&self.cliques[id], &self.cliques[p]),
            None => Vec::new(),
        }
    }

    fn supernode(&self, id: usize) -> Vec<usize> {
        let sep = self.separator(id);
        vset::difference(&self.cliques[id], &sep)
    }

    /// Visit key: smallest supernode vertex (empty supernodes first), then
    /// node id. Children are visited in ascending key order.
    fn child_key(&self, id: usize) -> (Option<usize>, usize) {
        (self.supernode(id).first().copied(), id)
    }

    fn sorted_children(&self, id: usize) -> Vec<usize> {
        let mut kids = self.children[id].clone();
        kids.sort_by_key(|&c| self.child_key(c));
        kids
    }

    /// Contract `child` into `target` (its parent or a sibling's merge
    /// host): the target absorbs the child's vertices and children.
    fn absorb(&mut self, target: usize, child: usize) {
        let grandkids = std::mem::take(&mut self.children[child]);
        for &g in &grandkids {
            self.parent[g] = Some(target);
        }
        self.cliques[target] = vset::union(&self.cliques[target], &self.cliques[child]);
        if let Some(p) = self.parent[child] {
            self.children[p].retain(|&c| c != child);
        }
        self.children[target].extend(grandkids);
        self.alive[child] = false;
    }

    /// Canonical clique tree from the surviving nodes: compacted, sorted by
    /// clique, separators and supernodes recomputed.
    fn into_tree(self) -> CliqueTree {
        let mut live: Vec<usize> = (0..self.cliques.len()).filter(|&i| self.alive[i]).collect();
        // Real nodes in clique order, the synthetic root (if any) last.
        live.sort_by(|&a, &b| {
            self.synthetic[a]
                .cmp(&self.synthetic[b])
                .then_with(|| self.cliques[a].cmp(&self.cliques[b]))
                .then(a.cmp(&b))
        });
        let mut remap = BTreeMap::new();
        for (new_idx, &old) in live.iter().enumerate() {
            remap.insert(old, new_idx);
        }
        let mut nodes: Vec<CliqueNode> = live
            .iter()
            .map(|&old| {
                let parent = self.parent[old].map(|p| remap[&p]);
                let mut children: Vec<usize> =
                    self.children[old].iter().map(|c| remap[c]).collect();
                children.sort_unstable();
                let clique = self.cliques[old].clone();
                CliqueNode {
                    clique,
                    separator: Vec::new(),
                    supernode: Vec::new(),
                    parent,
                    children,
                }
            })
            .collect();
        for i in 0..nodes.len() {
            let sep = match nodes[i].parent {
                Some(p) => vset::intersect(&nodes[i].clique, &nodes[p].clique),
                None => Vec::new(),
            };
            nodes[i].supernode = vset::difference(&nodes[i].clique, &sep);
            nodes[i].separator = sep;
        }
        CliqueTree::from_parts(nodes, remap[&self.root])
    }
}

/// Depth-first parent-child merging. Each visited clique merges into its
/// current parent when either threshold condition holds; the separators and
/// the tree structure are updated after every merge, and children adopted
/// from a merged clique are visited in turn.
pub fn parent_child_merge(t: &CliqueTree, params: &ParentChildParams) -> (CliqueTree, MergeLog) {
    let mut arena = Arena::from_tree(t);
    let mut log = MergeLog::new("parent-child");

    fn conditions(arena: &Arena, child: usize, parent: usize, p: &ParentChildParams) -> Option<f64> {
        let sep = vset::intersection_len(&arena.cliques[child], &arena.cliques[parent]);
        let fill = (arena.cliques[parent].len() - sep) * (arena.cliques[child].len() - sep);
        if fill <= p.t_fill {
            return Some(fill as f64);
        }
        let size = arena.supernode(child).len().max(arena.supernode(parent).len());
        if size <= p.t_size {
            return Some(size as f64);
        }
        None
    }

    fn visit(arena: &mut Arena, id: usize, params: &ParentChildParams, log: &mut MergeLog) {
        let mut done: BTreeSet<usize> = BTreeSet::new();
        loop {
            let next = arena
                .sorted_children(id)
                .into_iter()
                .find(|c| !done.contains(c));
            let Some(c) = next else { break };
            // Never merge a component root into the synthetic root.
            let value = if arena.synthetic[id] {
                None
            } else {
                conditions(arena, c, id, params)
            };
            match value {
                Some(v) => {
                    let parent_clique = arena.cliques[id].clone();
                    let child_clique = arena.cliques[c].clone();
                    arena.absorb(id, c);
                    log.records.push(MergeRecord {
                        merged: vec![parent_clique, child_clique],
                        result: arena.cliques[id].clone(),
                        value: v,
                    });
                }
                None => {
                    done.insert(c);
                    visit(arena, c, params, log);
                }
            }
        }
    }

    let root = arena.root;
    visit(&mut arena, root, params, &mut log);
    (arena.into_tree(), log)
}

/// Depth-first traversal merging with an overlap-ratio criterion.
///
/// At each node: (step 1) child pairs whose overlap ratio meets `sigma` are
/// merged, pulling in the node itself when the pair's intersection contains
/// it; merged cliques re-enter the candidate pool of the same node until no
/// pair qualifies. (Step 2) remaining children that meet the ratio against
/// the node are merged into it, also to a fixed point.
pub fn traversal_merge(t: &CliqueTree, params: &TraversalParams) -> (CliqueTree, MergeLog) {
    let sigma = params.sigma;
    let mut arena = Arena::from_tree(t);
    let mut log = MergeLog::new("traversal");
    log.notes
        .push("sibling pairs are re-examined to a fixed point at each node".into());

    fn ratio(a: &[usize], b: &[usize]) -> f64 {
        let inter = vset::intersection_len(a, b) as f64;
        let denom = a.len().max(b.len()) as f64;
        if denom == 0.0 {
            0.0
        } else {
            inter / denom
        }
    }

    fn visit(arena: &mut Arena, id: usize, sigma: f64, log: &mut MergeLog) {
        if !arena.synthetic[id] {
            // Step 1: sibling pairs, to a fixed point.
            'pairs: loop {
                let kids = arena.sorted_children(id);
                for (ai, &a) in kids.iter().enumerate() {
                    for &b in &kids[ai + 1..] {
                        let r = ratio(&arena.cliques[a], &arena.cliques[b]);
                        if r < sigma {
                            continue;
                        }
                        let inter = vset::intersect(&arena.cliques[a], &arena.cliques[b]);
                        let ca = arena.cliques[a].clone();
                        let cb = arena.cliques[b].clone();
                        if vset::is_subset(&arena.cliques[id], &inter) {
                            // The pair covers the node: three-way merge.
                            let cid = arena.cliques[id].clone();
                            arena.absorb(id, a);
                            arena.absorb(id, b);
                            log.records.push(MergeRecord {
                                merged: vec![cid, ca, cb],
                                result: arena.cliques[id].clone(),
                                value: r,
                            });
                        } else {
                            arena.absorb(a, b);
                            log.records.push(MergeRecord {
                                merged: vec![ca, cb],
                                result: arena.cliques[a].clone(),
                                value: r,
                            });
                        }
                        continue 'pairs;
                    }
                }
                break;
            }
            // Step 2: children into the node, to a fixed point.
            loop {
                let kids = arena.sorted_children(id);
                let hit = kids
                    .into_iter()
                    .find(|&c| ratio(&arena.cliques[c], &arena.cliques[id]) >= sigma);
                let Some(c) = hit else { break };
                let r = ratio(&arena.cliques[c], &arena.cliques[id]);
                let cid = arena.cliques[id].clone();
                let cc = arena.cliques[c].clone();
                arena.absorb(id, c);
                log.records.push(MergeRecord {
                    merged: vec![cid, cc],
                    result: arena.cliques[id].clone(),
                    value: r,
                });
            }
        }
        for c in arena.sorted_children(id) {
            visit(arena, c, sigma, log);
        }
    }

    let root = arena.root;
    visit(&mut arena, root, sigma, &mut log);
    (arena.into_tree(), log)
}
