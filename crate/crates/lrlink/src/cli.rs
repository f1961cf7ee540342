//! Argument definitions and the four commands.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use lrlink_core::eval::{precision_at_probe, ranked_candidates, CellResult, SweepPlan};
use lrlink_core::graph::{network_stats, split_train_probe, Graph, ParsedGraph};
use lrlink_core::linalg::{frobenius_norm, DenseMatrix};
use lrlink_core::predict::{score, Predictor, ScoreWarning};
use lrlink_core::rpca::{solve_rpca, RpcaOptions};
use rayon::prelude::*;

use crate::io::{read_dense, read_edge_list, write_dense};
use crate::report::{Cell, Format, Report};

#[derive(Debug, Parser)]
#[command(name = "lrlink", version, about = "Link prediction by low-rank matrix recovery")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Topology summary: n, |E|, C, r, <k>, H, R, tau, D.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// One train/probe split, precision of each predictor.
    Predict(PredictArgs),
    /// Mean and spread of precision over fractions and repeated splits.
    Sweep(SweepArgs),
    /// Split a matrix into low-rank backbone and sparse noise.
    Rpca(RpcaArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Edge list: one "u v [w]" per line, '#' and '%' start comments.
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Read the third column as edge weight.
    #[arg(long)]
    pub weighted: bool,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Sparsity weight; defaults to 1/sqrt(n).
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
}

impl SolverArgs {
    fn options(&self) -> RpcaOptions {
        RpcaOptions {
            lambda: self.lambda,
            tol: self.tol,
            max_iter: self.max_iter,
            ..RpcaOptions::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Comma-separated predictor names, or "all".
    #[arg(long, value_delimiter = ',', default_value = "lr")]
    pub predictor: Vec<String>,
    /// Share of edges moved to the probe set.
    #[arg(long, default_value_t = 0.1)]
    pub fraction: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Also write every unobserved pair with its score and rank (CSV).
    #[arg(long, value_name = "PATH")]
    pub ranked: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_delimiter = ',', default_value = "lr,cn")]
    pub predictor: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.15,0.2")]
    pub fractions: Vec<f64>,
    /// Random splits per fraction.
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct RpcaArgs {
    /// Edge list whose adjacency matrix is decomposed.
    #[arg(long = "in", value_name = "PATH", conflicts_with = "dense", required_unless_present = "dense")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub weighted: bool,
    /// Dense matrix file: "rows cols" then one row per line.
    #[arg(long, value_name = "PATH")]
    pub dense: Option<PathBuf>,
    /// Where to write the low-rank part.
    #[arg(long, value_name = "PATH")]
    pub backbone: PathBuf,
    /// Where to write the sparse part.
    #[arg(long, value_name = "PATH")]
    pub noise: PathBuf,
    /// Known low-rank matrix; reports the relative recovery error.
    #[arg(long, value_name = "PATH")]
    pub truth: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
}

/// What a command produced: the report text (empty when written to a file)
/// and warnings meant for stderr.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub warnings: Vec<String>,
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Stats { input, output } => cmd_stats(&input, &output),
        Command::Predict(args) => cmd_predict(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Rpca(args) => cmd_rpca(&args),
    }
}

fn network_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn load(input: &InputArgs, warnings: &mut Vec<String>) -> Result<Graph> {
    let ParsedGraph { graph, report } = read_edge_list(&input.input, input.weighted)?;
    if report.self_loops_dropped > 0 {
        warnings.push(format!("dropped {} self-loop(s)", report.self_loops_dropped));
    }
    if report.duplicates_collapsed > 0 {
        warnings.push(format!("collapsed {} duplicate edge(s), first weight kept", report.duplicates_collapsed));
    }
    if report.missing_weights > 0 {
        warnings.push(format!("{} edge(s) had no weight and got weight 1", report.missing_weights));
    }
    if graph.edge_count() == 0 {
        bail!("{}: no edges", input.input.display());
    }
    Ok(graph)
}

fn emit(report: &Report, output: &OutputArgs, warnings: Vec<String>) -> Result<Outcome> {
    let text = report.render(output.format)?;
    let stdout = match &output.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
            String::new()
        }
        None => text,
    };
    Ok(Outcome { stdout, warnings })
}

pub fn parse_predictors(names: &[String]) -> Result<Vec<Predictor>> {
    let mut out = Vec::new();
    for name in names {
        if name.trim().eq_ignore_ascii_case("all") {
            out.extend(Predictor::all());
        } else {
            out.push(name.parse::<Predictor>()?);
        }
    }
    if out.is_empty() {
        bail!("no predictor given; valid names: {}", Predictor::valid_names());
    }
    Ok(out)
}

fn opt_float(x: Option<f64>, decimals: usize) -> Cell {
    x.map_or(Cell::Missing, |v| Cell::Float(v, decimals))
}

pub fn cmd_stats(input: &InputArgs, output: &OutputArgs) -> Result<Outcome> {
    let mut warnings = Vec::new();
    let g = load(input, &mut warnings)?;
    let s = network_stats(&g)?;
    let mut report = Report::new(vec!["network", "n", "E", "C", "r", "k", "H", "R", "tau", "D"]);
    report.push(vec![
        Cell::Text(network_name(&input.input)),
        Cell::Int(s.n_vertices as u64),
        Cell::Int(s.n_edges as u64),
        opt_float(s.clustering, 3),
        opt_float(s.assortativity, 3),
        Cell::Float(s.avg_degree, 3),
        Cell::Float(s.heterogeneity, 3),
        Cell::Int(s.rank as u64),
        Cell::Float(s.rank_ratio, 3),
        Cell::Float(s.density, 4),
    ]);
    emit(&report, output, warnings)
}

fn warning_text(p: Predictor, w: &ScoreWarning) -> String {
    format!("{p}: {w}")
}

pub fn cmd_predict(args: &PredictArgs) -> Result<Outcome> {
    let predictors = parse_predictors(&args.predictor)?;
    let opts = args.solver.options();
    opts.validate()?;
    let mut warnings = Vec::new();
    let g = load(&args.input, &mut warnings)?;
    if g.is_complete() {
        bail!("graph is complete: every pair is a link, nothing is left to predict");
    }
    let split = split_train_probe(&g, args.fraction, args.seed)?;

    let scored = predictors
        .par_iter()
        .map(|&p| score(&split.train, p, &opts).map(|s| (p, s)))
        .collect::<Result<Vec<_>, _>>()?;

    let name = network_name(&args.input.input);
    let mut report = Report::new(vec!["network", "predictor", "fraction", "seed", "probe", "hits", "precision"]);
    let mut ranked = csv::Writer::from_writer(Vec::new());
    ranked.write_record(["predictor", "rank", "u", "v", "score", "in_probe"])?;
    for (p, s) in &scored {
        warnings.extend(s.warnings.iter().map(|w| warning_text(*p, w)));
        let outcome = precision_at_probe(&s.scores, &split.train, &split.probe)?;
        report.push(vec![
            Cell::Text(name.clone()),
            Cell::Text(p.to_string()),
            Cell::Exact(args.fraction),
            Cell::Int(args.seed),
            Cell::Int(outcome.probe_size as u64),
            Cell::Int(outcome.hits as u64),
            Cell::Float(outcome.precision, 3),
        ]);
        if args.ranked.is_some() {
            for (i, link) in ranked_candidates(&s.scores, &split.train, &split.probe)?.iter().enumerate() {
                ranked.write_record([
                    p.name().to_string(),
                    (i + 1).to_string(),
                    g.label(link.u).to_string(),
                    g.label(link.v).to_string(),
                    link.score.to_string(),
                    link.hit.to_string(),
                ])?;
            }
        }
    }
    if let Some(path) = &args.ranked {
        let bytes = ranked.into_inner().map_err(|e| anyhow!("{e}"))?;
        fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
    }
    emit(&report, &args.output, warnings)
}

/// One line per distinct warning, with how many runs raised it.
fn summarize_sweep_warnings(results: &[CellResult]) -> Vec<String> {
    let mut counts: BTreeMap<(Predictor, &'static str), usize> = BTreeMap::new();
    for r in results {
        for (p, w) in &r.warnings {
            let key = match w {
                ScoreWarning::UnitWeights => "unit",
                ScoreWarning::NotConverged { .. } => "converge",
                ScoreWarning::ZeroBackbone { .. } => "zero",
            };
            *counts.entry((*p, key)).or_default() += 1;
        }
    }
    let runs = results.len();
    counts
        .into_iter()
        .map(|((p, key), count)| match key {
            "unit" => warning_text(p, &ScoreWarning::UnitWeights),
            "zero" => format!("{p}: backbone was zero in {count} of {runs} runs; a larger --lambda keeps more structure"),
            _ => format!("{p}: robust PCA hit the iteration cap in {count} of {runs} runs"),
        })
        .collect()
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<Outcome> {
    let predictors = parse_predictors(&args.predictor)?;
    let mut warnings = Vec::new();
    let g = load(&args.input, &mut warnings)?;
    let name = network_name(&args.input.input);
    let plan = SweepPlan {
        network: &name,
        graph: &g,
        predictors,
        fractions: args.fractions.clone(),
        repetitions: args.reps,
        base_seed: args.seed,
        options: args.solver.options(),
    };
    plan.validate()?;
    if g.is_complete() {
        bail!("graph is complete: every pair is a link, nothing is left to predict");
    }
    // cells carry their own seeds, so execution order cannot change results
    let results = plan
        .cells()
        .into_par_iter()
        .map(|c| plan.run_cell(c))
        .collect::<Result<Vec<_>, _>>()?;
    warnings.extend(summarize_sweep_warnings(&results));

    let mut report = Report::new(vec!["network", "predictor", "fraction", "mean", "std", "reps"]);
    for r in plan.aggregate(&results)? {
        report.push(vec![
            Cell::Text(r.network),
            Cell::Text(r.predictor.to_string()),
            Cell::Exact(r.probe_fraction),
            Cell::Float(r.mean_precision, 3),
            Cell::Float(r.std_precision, 3),
            Cell::Int(r.repetitions as u64),
        ]);
    }
    emit(&report, &args.output, warnings)
}

pub fn cmd_rpca(args: &RpcaArgs) -> Result<Outcome> {
    let mut warnings = Vec::new();
    let a = match (&args.input, &args.dense) {
        (Some(path), None) => {
            let input = InputArgs {
                input: path.clone(),
                weighted: args.weighted,
            };
            lrlink_core::graph::adjacency_matrix(&load(&input, &mut warnings)?)
        }
        (None, Some(path)) => read_dense(path)?,
        _ => bail!("give exactly one of --in and --dense"),
    };
    if !a.is_square() {
        bail!("matrix must be square, got {}x{}", a.rows(), a.cols());
    }
    let truth = args.truth.as_deref().map(read_dense).transpose()?;
    let sol = solve_rpca(&a, &args.solver.options())?;
    if !sol.converged {
        warnings.push(format!(
            "robust PCA did not converge after {} iterations (residual {:.3e})",
            sol.iterations, sol.final_residual
        ));
    }
    write_dense(&args.backbone, &sol.backbone)?;
    write_dense(&args.noise, &sol.noise)?;

    let recovery = match &truth {
        Some(t) => Cell::Sci(relative_error(&sol.backbone, t)?),
        None => Cell::Missing,
    };
    let (nuclear, l1) = sol.objective_terms()?;
    let mut report = Report::new(vec![
        "n", "lambda", "iterations", "converged", "residual", "nuclear", "l1", "objective", "recovery_error",
    ]);
    report.push(vec![
        Cell::Int(a.rows() as u64),
        Cell::Sci(sol.lambda),
        Cell::Int(sol.iterations as u64),
        Cell::Bool(sol.converged),
        Cell::Sci(sol.final_residual),
        Cell::Float(nuclear, 6),
        Cell::Float(l1, 6),
        Cell::Float(nuclear + sol.lambda * l1, 6),
        recovery,
    ]);
    emit(&report, &args.output, warnings)
}

/// `||x - truth||_F / ||truth||_F`, or the plain norm when `truth` is zero.
pub fn relative_error(x: &DenseMatrix, truth: &DenseMatrix) -> Result<f64> {
    let diff = frobenius_norm(&x.sub(truth)?);
    let scale = frobenius_norm(truth);
    Ok(if scale == 0.0 { diff } else { diff / scale })
}
