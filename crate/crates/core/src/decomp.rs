//! Block decomposition of a positive semidefinite constraint over a clique
//! set: entry selectors extract each clique's principal submatrix, overlap
//! consistency constraints tie shared entries together along clique-tree
//! edges, and the reverse direction assembles clique blocks back into a
//! matrix whose sparsity stays inside the extended pattern.

use std::fmt::Write as _;

use crate::chordal::CliqueSet;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::sdpa::SdpProblem;
use crate::tree::CliqueTree;
use crate::vset;
use crate::weights::CostModel;

/// 0/1 selector for one clique: row `i` picks global index `clique[i]`.
/// Conceptually a `|clique| x n` matrix; stored implicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntrySelector {
    clique: Vec<usize>,
    n: usize,
}

impl EntrySelector {
    pub fn new(clique: Vec<usize>, n: usize) -> Result<Self> {
        let mut clique = clique;
        clique.sort_unstable();
        clique.dedup();
        if clique.is_empty() {
            return Err(Error::InvalidInput("empty clique".into()));
        }
        if clique[0] < 1 || *clique.last().unwrap() > n {
            return Err(Error::InvalidInput(format!(
                "clique {clique:?} out of range for n = {n}"
            )));
        }
        Ok(Self { clique, n })
    }

    pub fn clique(&self) -> &[usize] {
        &self.clique
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block_dim(&self) -> usize {
        self.clique.len()
    }

    /// The selector as a dense 0/1 matrix.
    pub fn to_dense(&self) -> Matrix {
        let mut t = Matrix::zeros(self.clique.len(), self.n);
        for (i, &v) in self.clique.iter().enumerate() {
            t.set(i, v - 1, 1.0);
        }
        t
    }

    /// Principal submatrix `X[C, C]` of a dense symmetric `n x n` matrix.
    pub fn extract(&self, x: &Matrix) -> Result<Matrix> {
        if x.rows() != self.n || x.cols() != self.n {
            return Err(Error::InvalidInput(format!(
                "expected {0}x{0} matrix, got {1}x{2}",
                self.n,
                x.rows(),
                x.cols()
            )));
        }
        let d = self.clique.len();
        let mut out = Matrix::zeros(d, d);
        for (i, &vi) in self.clique.iter().enumerate() {
            for (j, &vj) in self.clique.iter().enumerate() {
                out.set(i, j, x.get(vi - 1, vj - 1));
            }
        }
        Ok(out)
    }

    /// Adds the block back into the global matrix at the clique's indices.
    pub fn scatter_add(&self, block: &Matrix, global: &mut Matrix) -> Result<()> {
        let d = self.clique.len();
        if block.rows() != d || block.cols() != d {
            return Err(Error::InvalidInput(format!(
                "block must be {d}x{d}, got {}x{}",
                block.rows(),
                block.cols()
            )));
        }
        if global.rows() != self.n || global.cols() != self.n {
            return Err(Error::InvalidInput("global dimension mismatch".into()));
        }
        for (i, &vi) in self.clique.iter().enumerate() {
            for (j, &vj) in self.clique.iter().enumerate() {
                global.add_to(vi - 1, vj - 1, block.get(i, j));
            }
        }
        Ok(())
    }
}

/// One overlap equality: entry (`row_a`, `col_a`) of block `block_a` equals
/// entry (`row_b`, `col_b`) of block `block_b`. Blocks and local indices are
/// 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConsistencyConstraint {
    pub block_a: usize,
    pub row_a: usize,
    pub col_a: usize,
    pub block_b: usize,
    pub row_b: usize,
    pub col_b: usize,
}

/// A PSD block of an SDP split into per-clique blocks plus the overlap
/// constraints that keep shared entries equal.
#[derive(Debug, Clone, PartialEq)]
pub struct DecomposedProblem {
    /// 1-based SDPA block that was decomposed.
    pub psd_block: usize,
    /// Clique vertex sets, one per block, in canonical order.
    pub blocks: Vec<Vec<usize>>,
    pub selectors: Vec<EntrySelector>,
    pub constraints: Vec<ConsistencyConstraint>,
    /// The problem the decomposition was derived from.
    pub problem: SdpProblem,
}

/// Decomposition shape summary.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionStats {
    pub clique_count: usize,
    pub max_clique_size: usize,
    pub sum_block_dims: usize,
    pub consistency_count: usize,
    pub modeled_cost: f64,
    pub fill_edges: usize,
}

/// Σ t_proj(|C|) and the shape counters for a clique tree under a model.
pub fn decomposition_stats(
    tree: &CliqueTree,
    model: &CostModel,
    fill_edges: usize,
) -> DecompositionStats {
    let cliques = tree.cliques();
    DecompositionStats {
        clique_count: cliques.len(),
        max_clique_size: cliques.iter().map(Vec::len).max().unwrap_or(0),
        sum_block_dims: cliques.iter().map(Vec::len).sum(),
        consistency_count: tree.consistency_count(),
        modeled_cost: cliques.iter().map(|c| model.projection_time(c.len())).sum(),
        fill_edges,
    }
}

/// Splits the PSD block `psd_block` of `problem` along the cliques.
///
/// Consistency constraints are generated along clique-tree edges only (the
/// separator entries between each clique and its parent); the running
/// intersection property propagates equality across the whole tree. Every
/// nonzero of every coefficient matrix in the block must fall inside some
/// clique, otherwise the decomposition does not cover the problem.
pub fn domain_decompose(
    problem: &SdpProblem,
    psd_block: usize,
    cs: &CliqueSet,
    tree: &CliqueTree,
) -> Result<DecomposedProblem> {
    let n = problem.block_size(psd_block)?;
    if problem.is_diagonal_block(psd_block) {
        return Err(Error::InvalidInput(format!(
            "block {psd_block} is diagonal; nothing to decompose"
        )));
    }
    if cs.n() != n {
        return Err(Error::InvalidInput(format!(
            "clique set is over {} vertices but block {psd_block} has size {n}",
            cs.n()
        )));
    }
    let blocks = tree.cliques();
    if blocks != cs.cliques() {
        return Err(Error::InvalidInput(
            "clique tree does not match the clique set".into(),
        ));
    }

    // Coverage: each entry of each coefficient matrix must land in a clique.
    let mut membership: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (b, clique) in blocks.iter().enumerate() {
        for &v in clique {
            membership[v].push(b);
        }
    }
    for e in &problem.entries {
        if e.block != psd_block {
            continue;
        }
        let covered = membership[e.row]
            .iter()
            .any(|&b| vset::contains(&blocks[b], e.col));
        if !covered {
            return Err(Error::Coverage(format!(
                "entry ({}, {}) of matrix {} lies outside every clique",
                e.row, e.col, e.matrix
            )));
        }
    }

    let selectors: Vec<EntrySelector> = blocks
        .iter()
        .map(|c| EntrySelector::new(c.clone(), n))
        .collect::<Result<_>>()?;

    // Node index -> 1-based block id (real nodes appear in clique order).
    let real: Vec<usize> = tree.real_nodes().collect();
    let block_id = |node: usize| real.iter().position(|&r| r == node).unwrap() + 1;

    let local = |clique: &[usize], v: usize| clique.binary_search(&v).unwrap() + 1;

    let mut constraints = Vec::new();
    for &node in &real {
        let Some(parent) = tree.node(node).parent else {
            continue;
        };
        if tree.is_synthetic(parent) {
            continue;
        }
        let sep = &tree.node(node).separator;
        let child_clique = &tree.node(node).clique;
        let parent_clique = &tree.node(parent).clique;
        for (ai, &i) in sep.iter().enumerate() {
            for &j in &sep[ai..] {
                constraints.push(ConsistencyConstraint {
                    block_a: block_id(node),
                    row_a: local(child_clique, i),
                    col_a: local(child_clique, j),
                    block_b: block_id(parent),
                    row_b: local(parent_clique, i),
                    col_b: local(parent_clique, j),
                });
            }
        }
    }

    Ok(DecomposedProblem {
        psd_block,
        blocks,
        selectors,
        constraints,
        problem: problem.clone(),
    })
}

/// `S = Σ T_ℓ^T S_ℓ T_ℓ`: assembles clique blocks into a global matrix. The
/// result's sparsity stays inside the union of clique supports, and a sum of
/// positive semidefinite blocks is positive semidefinite.
pub fn range_assemble(blocks: &[Matrix], selectors: &[EntrySelector]) -> Result<Matrix> {
    if blocks.len() != selectors.len() {
        return Err(Error::InvalidInput(format!(
            "{} blocks but {} selectors",
            blocks.len(),
            selectors.len()
        )));
    }
    let n = selectors
        .first()
        .map(EntrySelector::n)
        .ok_or_else(|| Error::InvalidInput("no blocks to assemble".into()))?;
    if selectors.iter().any(|s| s.n() != n) {
        return Err(Error::InvalidInput("selectors disagree on dimension".into()));
    }
    let mut global = Matrix::zeros(n, n);
    for (block, sel) in blocks.iter().zip(selectors) {
        sel.scatter_add(block, &mut global)?;
    }
    Ok(global)
}

impl DecomposedProblem {
    /// Versioned text manifest: header, block list, consistency records,
    /// stats footer. Blocks and local indices are 1-based.
    pub fn manifest(&self, stats: &DecompositionStats) -> String {
        let mut out = String::new();
        writeln!(out, "cliquemerge-decomp v1").unwrap();
        writeln!(
            out,
            "# consistency constraints follow clique-tree edges (separator entries, upper triangle)"
        )
        .unwrap();
        writeln!(out, "# blocks, vertices, and local indices are 1-based").unwrap();
        writeln!(
            out,
            "problem m={} psd_block={} n={}",
            self.problem.num_constraints,
            self.psd_block,
            self.selectors.first().map_or(0, EntrySelector::n)
        )
        .unwrap();
        for (idx, clique) in self.blocks.iter().enumerate() {
            let verts: Vec<String> = clique.iter().map(usize::to_string).collect();
            writeln!(
                out,
                "block {} dim={} vertices={}",
                idx + 1,
                clique.len(),
                verts.join(",")
            )
            .unwrap();
        }
        for c in &self.constraints {
            writeln!(
                out,
                "constraint ({}, {}, {}) == ({}, {}, {})",
                c.block_a, c.row_a, c.col_a, c.block_b, c.row_b, c.col_b
            )
            .unwrap();
        }
        writeln!(
            out,
            "stats cliques={} max_clique={} sum_block_dims={} consistency={} modeled_cost={} fill_edges={}",
            stats.clique_count,
            stats.max_clique_size,
            stats.sum_block_dims,
            stats.consistency_count,
            stats.modeled_cost,
            stats.fill_edges
        )
        .unwrap();
        out
    }
}
