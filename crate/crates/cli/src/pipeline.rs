//! Shared plumbing between the subcommands: input loading, the
//! pattern-to-clique-tree pipeline, strategy execution, and output files.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use cliquemerge_core::chordal::{chordal_extension, maximal_cliques, CliqueSet, OrderingHeuristic};
use cliquemerge_core::decomp::{decomposition_stats, domain_decompose, DecompositionStats};
use cliquemerge_core::error::Error as CoreError;
use cliquemerge_core::merge::{
    build_clique_graph, clique_graph_merge, parent_child_merge, recompute_clique_tree,
    traversal_merge, MergeLog, ParentChildParams, TraversalParams,
};
use cliquemerge_core::sdpa::{parse_sdpa, parse_sdpa_lenient, problem_patterns};
use cliquemerge_core::tree::{build_clique_tree, CliqueTree};
use cliquemerge_core::weights::{estimated_weight, CostModel, CostModelFile};
use cliquemerge_core::{SdpProblem, SparsityGraph};

/// Command-level error with the exit code it maps to: configuration and
/// algorithmic failures exit 1, I/O and parse failures exit 2.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Algo(String),
    Io(String),
    Parse(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Algo(_) => 1,
            CliError::Io(_) | CliError::Parse(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Algo(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "{m}"),
            CliError::Parse(m) => write!(f, "{m}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Parse { .. } => CliError::Parse(e.to_string()),
            CoreError::Io(_) => CliError::Io(e.to_string()),
            other => CliError::Algo(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    None,
    ParentChild,
    Traversal,
    CliqueGraph,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::None => "none",
            Strategy::ParentChild => "parent-child",
            Strategy::Traversal => "traversal",
            Strategy::CliqueGraph => "clique-graph",
        }
    }
}

impl FromStr for Strategy {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "none" => Ok(Strategy::None),
            "parent-child" => Ok(Strategy::ParentChild),
            "traversal" => Ok(Strategy::Traversal),
            "clique-graph" => Ok(Strategy::CliqueGraph),
            other => Err(CliError::Config(format!(
                "unknown strategy '{other}' (expected none, parent-child, traversal, or clique-graph)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    Nominal,
    Estimated,
}

impl FromStr for Weighting {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "nominal" => Ok(Weighting::Nominal),
            "estimated" => Ok(Weighting::Estimated),
            other => Err(CliError::Config(format!(
                "unknown weighting '{other}' (expected nominal or estimated)"
            ))),
        }
    }
}

/// Resolves the active cost model: nominal needs nothing, estimated needs a
/// calibrated model file.
pub fn resolve_model(weighting: Weighting, cost_model: Option<&Path>) -> CliResult<CostModel> {
    match weighting {
        Weighting::Nominal => Ok(CostModel::NOMINAL),
        Weighting::Estimated => {
            let path = cost_model.ok_or_else(|| {
                CliError::Config(
                    "estimated weighting requires --cost-model <path> (run 'calibrate' first)"
                        .into(),
                )
            })?;
            Ok(CostModelFile::load(path)?.model)
        }
    }
}

pub fn load_problem(path: &Path, lenient: bool) -> CliResult<SdpProblem> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    if lenient {
        let (problem, warnings) = parse_sdpa_lenient(&text)?;
        for w in warnings {
            eprintln!("warning: {w}");
        }
        Ok(problem)
    } else {
        Ok(parse_sdpa(&text)?)
    }
}

/// The decomposition pipeline up to the initial clique tree.
pub struct Decomposition {
    pub problem: SdpProblem,
    pub psd_block: usize,
    pub pattern: SparsityGraph,
    pub fill_edges: usize,
    pub cliques: CliqueSet,
    pub tree: CliqueTree,
}

pub fn decompose(problem: SdpProblem) -> CliResult<Decomposition> {
    let psd_blocks = problem.psd_blocks();
    let &psd_block = psd_blocks
        .first()
        .ok_or_else(|| CliError::Algo("problem has no semidefinite block".into()))?;
    if psd_blocks.len() > 1 {
        eprintln!(
            "warning: {} semidefinite blocks; decomposing block {} only",
            psd_blocks.len(),
            psd_block
        );
    }
    let patterns = problem_patterns(&problem, psd_block)?;
    let pattern = SparsityGraph::aggregate(&patterns)?;
    let (extended, ordering) = chordal_extension(&pattern, OrderingHeuristic::MinDegree)?;
    let fill_edges = extended.edge_count() - pattern.edge_count();
    let cliques = maximal_cliques(&extended, &ordering)?;
    let tree = build_clique_tree(&cliques)?;
    Ok(Decomposition {
        problem,
        psd_block,
        pattern,
        fill_edges,
        cliques,
        tree,
    })
}

/// Result of running one strategy over an initial decomposition.
pub struct StrategyRun {
    pub tree: CliqueTree,
    pub log: MergeLog,
    pub stats: DecompositionStats,
    pub merge_seconds: f64,
}

pub fn run_strategy(
    decomp: &Decomposition,
    strategy: Strategy,
    model: &CostModel,
    params: &ParentChildParams,
    sigma: f64,
) -> CliResult<StrategyRun> {
    let start = Instant::now();
    let (tree, log) = match strategy {
        Strategy::None => (
            decomp.tree.clone(),
            MergeLog {
                strategy: "none".into(),
                notes: Vec::new(),
                records: Vec::new(),
            },
        ),
        Strategy::ParentChild => parent_child_merge(&decomp.tree, params),
        Strategy::Traversal => {
            let params = TraversalParams::new(sigma)
                .map_err(|e| CliError::Config(e.to_string()))?;
            traversal_merge(&decomp.tree, &params)
        }
        Strategy::CliqueGraph => {
            let cg = build_clique_graph(&decomp.cliques);
            let (merged, log) =
                clique_graph_merge(&cg, |a, b| estimated_weight(a, b, model));
            (recompute_clique_tree(&merged)?, log)
        }
    };
    let merge_seconds = start.elapsed().as_secs_f64();
    let stats = decomposition_stats(&tree, model, decomp.fill_edges);
    Ok(StrategyRun {
        tree,
        log,
        stats,
        merge_seconds,
    })
}

pub fn stats_line(s: &DecompositionStats) -> String {
    format!(
        "cliques={} max_clique={} consistency={} modeled_cost={}",
        s.clique_count, s.max_clique_size, s.consistency_count, s.modeled_cost
    )
}

/// Manifest for a strategy's final tree against the source problem.
pub fn manifest_for(decomp: &Decomposition, run: &StrategyRun) -> CliResult<String> {
    let n = decomp.problem.block_size(decomp.psd_block)?;
    let set = CliqueSet::new(n, run.tree.cliques())?;
    let d = domain_decompose(&decomp.problem, decomp.psd_block, &set, &run.tree)?;
    Ok(d.manifest(&run.stats))
}

pub fn write_output(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}
