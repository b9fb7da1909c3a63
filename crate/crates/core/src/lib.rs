//! Chordal decomposition and clique merging for sparse semidefinite
//! programs.
//!
//! The pipeline: read a sparse SDP ([`sdpa`]), form the aggregate sparsity
//! pattern of its coefficient matrices ([`graph`]), extend it to a chordal
//! pattern and enumerate the maximal cliques ([`chordal`]), build a clique
//! tree ([`tree`]), then reshape the decomposition with one of the merging
//! strategies ([`merge`]) driven by a nominal or machine-calibrated cost
//! model ([`weights`]). The decomposed blocks, entry selectors, and overlap
//! constraints live in [`decomp`].

pub mod chordal;
pub mod decomp;
pub mod error;
pub mod graph;
pub mod matrix;
pub mod merge;
pub mod sdpa;
pub mod tree;
pub mod weights;

mod vset;

pub use chordal::{CliqueSet, EliminationOrdering, OrderingHeuristic};
pub use error::{Error, Result};
pub use graph::SparsityGraph;
pub use matrix::Matrix;
pub use merge::{CliqueGraph, MergeLog, MergeRecord, ParentChildParams, TraversalParams};
pub use sdpa::SdpProblem;
pub use tree::{CliqueNode, CliqueTree};
pub use weights::{CostModel, CostModelFile, TimingSample};
