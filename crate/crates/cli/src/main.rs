//! `cliquemerge`: decompose sparse SDPA problems along their chordal
//! structure and shape the clique decomposition with a merging strategy.
//!
//! Subcommands: `analyze` reports the initial decomposition, `merge` runs
//! one strategy and writes the manifest, merge log, and stats, `compare`
//! tabulates several strategies side by side, and `calibrate` fits the
//! projection cost model used by the estimated weighting.

mod pipeline;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use cliquemerge_core::merge::ParentChildParams;
use cliquemerge_core::weights::{
    fit_cost_model, measure_projection_times, utc_timestamp, CostModel, CostModelFile,
    TimingSample, DEFAULT_CALIBRATION_SIZES,
};

use pipeline::{
    decompose, load_problem, manifest_for, resolve_model, run_strategy, stats_line, write_output,
    CliError, CliResult, Strategy, Weighting,
};

/// Print to stdout, exiting quietly if the pipe has been closed (e.g. when
/// the output is piped into `head`).
macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(
    name = "cliquemerge",
    version,
    about = "Chordal decomposition and clique merging for sparse SDPs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct StrategyOpts {
    /// Merging strategy: none | parent-child | traversal | clique-graph.
    #[arg(long, default_value = "clique-graph")]
    strategy: String,
    /// Edge weighting: nominal | estimated.
    #[arg(long, default_value = "nominal")]
    weighting: String,
    /// Fill threshold for the parent-child strategy.
    #[arg(long = "t-fill", default_value_t = 9)]
    t_fill: usize,
    /// Supernode-size threshold for the parent-child strategy.
    #[arg(long = "t-size", default_value_t = 9)]
    t_size: usize,
    /// Overlap-ratio threshold for the traversal strategy, in (0, 1].
    #[arg(long, default_value_t = 0.4)]
    sigma: f64,
    /// Calibrated cost model file (required for estimated weighting).
    #[arg(long)]
    cost_model: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Report the aggregate pattern and initial clique decomposition.
    Analyze {
        input: PathBuf,
        /// Symmetrize lower-triangular entries instead of rejecting them.
        #[arg(long)]
        lenient: bool,
    },
    /// Run one merging strategy; write manifest, merge log, and stats.
    Merge {
        input: PathBuf,
        #[command(flatten)]
        opts: StrategyOpts,
        #[arg(long)]
        lenient: bool,
        /// Random seed (reserved for seeded subcommands; accepted for
        /// uniformity).
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run several strategies and tabulate the decomposition shapes.
    Compare {
        input: PathBuf,
        /// Comma-separated strategy list (at least two).
        #[arg(long, default_value = "none,parent-child,traversal,clique-graph")]
        strategies: String,
        #[command(flatten)]
        opts: StrategyOpts,
        #[arg(long)]
        lenient: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Measure projection times and fit the cost model.
    Calibrate {
        /// Comma-separated matrix sizes (default 16,32,64,128,256,512).
        #[arg(long)]
        sizes: Option<String>,
        /// Timed repetitions per size (one extra warm-up run is discarded).
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Skip measurement: fit against exact samples of a*N^3 + b*N^2,
        /// e.g. --synthetic a=2,b=5.
        #[arg(long)]
        synthetic: Option<String>,
        /// Output path for the model file (default `<out-dir>/cost_model.txt`).
        #[arg(long)]
        cost_model: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Analyze { input, lenient } => cmd_analyze(&input, lenient),
        Command::Merge {
            input,
            opts,
            lenient,
            seed: _,
            out_dir,
        } => cmd_merge(&input, &opts, lenient, &out_dir),
        Command::Compare {
            input,
            strategies,
            opts,
            lenient,
            out_dir,
        } => cmd_compare(&input, &strategies, &opts, lenient, &out_dir),
        Command::Calibrate {
            sizes,
            reps,
            seed,
            synthetic,
            cost_model,
            out_dir,
        } => cmd_calibrate(sizes.as_deref(), reps, seed, synthetic.as_deref(), cost_model, &out_dir),
    }
}

fn cmd_analyze(input: &Path, lenient: bool) -> CliResult<()> {
    let problem = load_problem(input, lenient)?;
    let d = decompose(problem)?;
    outln!("input: {}", input.display());
    outln!(
        "psd block {}: n={}",
        d.psd_block,
        d.problem.block_size(d.psd_block)?
    );
    outln!("aggregate edges: {}", d.pattern.edge_count());
    outln!("chordal extension fill edges: {}", d.fill_edges);
    outln!("initial cliques: {}", d.cliques.len());
    outln!("max clique size: {}", d.cliques.max_clique_size());
    outln!("cliques:");
    for c in d.cliques.cliques() {
        outln!("  {c:?}");
    }
    Ok(())
}

fn parse_strategy_opts(opts: &StrategyOpts) -> CliResult<(Strategy, Weighting, CostModel)> {
    let strategy = Strategy::from_str(&opts.strategy)?;
    let weighting = Weighting::from_str(&opts.weighting)?;
    let model = resolve_model(weighting, opts.cost_model.as_deref())?;
    if !(opts.sigma > 0.0 && opts.sigma <= 1.0) {
        return Err(CliError::Config(format!(
            "--sigma must lie in (0, 1], got {}",
            opts.sigma
        )));
    }
    Ok((strategy, weighting, model))
}

fn cmd_merge(input: &Path, opts: &StrategyOpts, lenient: bool, out_dir: &Path) -> CliResult<()> {
    let (strategy, _, model) = parse_strategy_opts(opts)?;
    let params = ParentChildParams {
        t_fill: opts.t_fill,
        t_size: opts.t_size,
    };
    let problem = load_problem(input, lenient)?;
    let d = decompose(problem)?;
    let run = run_strategy(&d, strategy, &model, &params, opts.sigma)?;

    let manifest = manifest_for(&d, &run)?;
    let line = stats_line(&run.stats);
    write_output(out_dir, "manifest.txt", &manifest)?;
    write_output(out_dir, "merge_log.txt", &run.log.to_text())?;
    write_output(out_dir, "stats.txt", &format!("{line}\n"))?;
    outln!("{line}");
    Ok(())
}

fn cmd_compare(
    input: &Path,
    strategies: &str,
    opts: &StrategyOpts,
    lenient: bool,
    out_dir: &Path,
) -> CliResult<()> {
    let (_, _, model) = parse_strategy_opts(opts)?;
    let list: Vec<Strategy> = strategies
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| Strategy::from_str(s.trim()))
        .collect::<CliResult<_>>()?;
    if list.len() < 2 {
        return Err(CliError::Config(
            "compare needs at least two strategies (--strategies a,b)".into(),
        ));
    }
    let params = ParentChildParams {
        t_fill: opts.t_fill,
        t_size: opts.t_size,
    };
    let problem = load_problem(input, lenient)?;
    let d = decompose(problem)?;

    let mut rows = Vec::new();
    for &strategy in &list {
        let run = run_strategy(&d, strategy, &model, &params, opts.sigma)?;
        rows.push((strategy.name().to_string(), run));
    }

    outln!(
        "{:<14} {:>8} {:>11} {:>12} {:>14} {:>14}",
        "strategy", "cliques", "max_clique", "consistency", "modeled_cost", "merge_seconds"
    );
    let mut csv = String::from("# cliquemerge compare v1\n");
    csv.push_str("strategy,cliques,max_clique,consistency,modeled_cost,merge_seconds\n");
    for (name, run) in &rows {
        let s = &run.stats;
        outln!(
            "{:<14} {:>8} {:>11} {:>12} {:>14} {:>14.6}",
            name,
            s.clique_count,
            s.max_clique_size,
            s.consistency_count,
            s.modeled_cost,
            run.merge_seconds
        );
        csv.push_str(&format!(
            "{},{},{},{},{},{:.6}\n",
            name, s.clique_count, s.max_clique_size, s.consistency_count, s.modeled_cost,
            run.merge_seconds
        ));
    }
    write_output(out_dir, "compare.csv", &csv)?;
    Ok(())
}

fn parse_synthetic(spec: &str) -> CliResult<CostModel> {
    let mut a = None;
    let mut b = None;
    for part in spec.split(',') {
        let Some((key, value)) = part.split_once('=') else {
            return Err(CliError::Config(format!(
                "--synthetic expects a=<num>,b=<num>, got '{spec}'"
            )));
        };
        let value: f64 = value.trim().parse().map_err(|_| {
            CliError::Config(format!("invalid number '{}' in --synthetic", value.trim()))
        })?;
        match key.trim() {
            "a" => a = Some(value),
            "b" => b = Some(value),
            other => {
                return Err(CliError::Config(format!(
                    "unknown coefficient '{other}' in --synthetic"
                )))
            }
        }
    }
    match (a, b) {
        (Some(a), Some(b)) => Ok(CostModel { a, b }),
        _ => Err(CliError::Config(
            "--synthetic needs both a= and b=".into(),
        )),
    }
}

fn cmd_calibrate(
    sizes: Option<&str>,
    reps: usize,
    seed: u64,
    synthetic: Option<&str>,
    cost_model: Option<PathBuf>,
    out_dir: &Path,
) -> CliResult<()> {
    let sizes: Vec<usize> = match sizes {
        Some(list) => list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| CliError::Config(format!("invalid size '{}'", s.trim())))
            })
            .collect::<CliResult<_>>()?,
        None => DEFAULT_CALIBRATION_SIZES.to_vec(),
    };

    let samples: Vec<TimingSample> = match synthetic {
        Some(spec) => {
            let truth = parse_synthetic(spec)?;
            sizes
                .iter()
                .map(|&n| TimingSample {
                    size: n,
                    time: truth.projection_time(n),
                })
                .collect()
        }
        None => measure_projection_times(&sizes, reps, seed)?,
    };

    let fit = fit_cost_model(&samples)?;
    if fit.clamped {
        eprintln!("warning: cubic coefficient came out negative; clamped to 0 and refit");
    }

    let file = CostModelFile {
        model: fit.model,
        fitted_at: utc_timestamp(),
        sizes,
        residual: fit.residual,
    };
    let path = cost_model.unwrap_or_else(|| out_dir.join("cost_model.txt"));
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    file.save(&path)?;
    outln!(
        "a={:e} b={:e} residual={:e} -> {}",
        fit.model.a,
        fit.model.b,
        fit.residual,
        path.display()
    );
    Ok(())
}
