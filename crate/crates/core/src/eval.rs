//! Top-L precision evaluation and multi-split sweeps.
//!
//! Candidates are all vertex pairs without a training edge. The `L` highest
//! scoring candidates (`L` = probe size) are compared against the probe set;
//! precision is `hits / L`. With `L = |probe|` precision and recall coincide.
//!
//! Ties are broken deterministically: score descending, then the vertex-index
//! pair ascending.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{invalid, Result};
use crate::graph::{split_train_probe, Edge, Graph};
use crate::predict::{score, Predictor, ScoreMatrix, ScoreWarning};
use crate::rpca::RpcaOptions;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankedLink {
    pub u: usize,
    pub v: usize,
    pub score: f64,
    /// Whether the pair is in the probe set.
    pub hit: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionOutcome {
    /// The top `probe_size` candidates, best first.
    pub ranked_links: Vec<RankedLink>,
    pub hits: usize,
    pub precision: f64,
    pub probe_size: usize,
}

impl PredictionOutcome {
    /// Identical to precision because the cut-off equals the probe size.
    pub fn recall(&self) -> f64 {
        self.hits as f64 / self.probe_size as f64
    }
}

fn rank_order(a: &RankedLink, b: &RankedLink) -> Ordering {
    // scores are finite, so partial_cmp is total here and treats -0.0 == 0.0
    b.score
        .partial_cmp(&a.score)
        .unwrap_or(Ordering::Equal)
        .then((a.u, a.v).cmp(&(b.u, b.v)))
}

fn probe_set(scores: &ScoreMatrix, train: &Graph, probe: &[Edge]) -> Result<BTreeSet<(usize, usize)>> {
    let n = train.vertex_count();
    if scores.n() != n {
        return Err(invalid(format!("score matrix is {}x{0} but the graph has {n} vertices", scores.n())));
    }
    if probe.is_empty() {
        return Err(invalid("probe set is empty"));
    }
    let mut probe_pairs = BTreeSet::new();
    for e in probe {
        train.check_vertex(e.u)?;
        train.check_vertex(e.v)?;
        let pair = if e.u < e.v { (e.u, e.v) } else { (e.v, e.u) };
        if train.has_edge(pair.0, pair.1) {
            return Err(invalid(format!("probe pair {pair:?} is also a training edge")));
        }
        if !probe_pairs.insert(pair) {
            return Err(invalid(format!("probe pair {pair:?} appears twice")));
        }
    }
    Ok(probe_pairs)
}

fn candidates(scores: &ScoreMatrix, train: &Graph) -> Vec<RankedLink> {
    let n = train.vertex_count();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2 - train.edge_count());
    for u in 0..n {
        for v in u + 1..n {
            if !train.has_edge(u, v) {
                out.push(RankedLink {
                    u,
                    v,
                    score: scores.score(u, v),
                    hit: false,
                });
            }
        }
    }
    out
}

fn mark_hits(links: &mut [RankedLink], probe_pairs: &BTreeSet<(usize, usize)>) {
    for link in links {
        link.hit = probe_pairs.contains(&(link.u, link.v));
    }
}

/// Every unobserved pair in rank order, with probe membership marked.
pub fn ranked_candidates(scores: &ScoreMatrix, train: &Graph, probe: &[Edge]) -> Result<Vec<RankedLink>> {
    let probe_pairs = probe_set(scores, train, probe)?;
    let mut all = candidates(scores, train);
    all.sort_unstable_by(rank_order);
    mark_hits(&mut all, &probe_pairs);
    Ok(all)
}

/// Ranks the unobserved pairs and counts probe hits among the top `|probe|`.
pub fn precision_at_probe(scores: &ScoreMatrix, train: &Graph, probe: &[Edge]) -> Result<PredictionOutcome> {
    let probe_pairs = probe_set(scores, train, probe)?;
    let mut top = candidates(scores, train);
    let l = probe_pairs.len();
    if l < top.len() {
        top.select_nth_unstable_by(l, rank_order);
        top.truncate(l);
    }
    top.sort_unstable_by(rank_order);
    mark_hits(&mut top, &probe_pairs);
    let hits = top.iter().filter(|link| link.hit).count();
    Ok(PredictionOutcome {
        ranked_links: top,
        hits,
        precision: hits as f64 / l as f64,
        probe_size: l,
    })
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub outcome: PredictionOutcome,
    pub warnings: Vec<ScoreWarning>,
}

/// Split, train on the training graph only, evaluate on the probe.
pub fn run_experiment(
    g: &Graph,
    predictor: Predictor,
    fraction: f64,
    seed: u64,
    opts: &RpcaOptions,
) -> Result<ExperimentOutcome> {
    if g.is_complete() {
        return Err(invalid("graph is complete: every pair is a link, nothing is left to predict"));
    }
    let split = split_train_probe(g, fraction, seed)?;
    let scored = score(&split.train, predictor, opts)?;
    let outcome = precision_at_probe(&scored.scores, &split.train, &split.probe)?;
    Ok(ExperimentOutcome {
        outcome,
        warnings: scored.warnings,
    })
}

const fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Split seed for one `(fraction, repetition)` cell of a sweep.
///
/// The predictor is deliberately not mixed in: all predictors in a cell see
/// the same split, so their precisions are paired.
pub fn run_seed(base_seed: u64, fraction_index: usize, repetition: usize) -> u64 {
    let h = splitmix64(base_seed);
    let h = splitmix64(h ^ fraction_index as u64);
    splitmix64(h ^ (repetition as u64).rotate_left(32))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub network: String,
    pub predictor: Predictor,
    pub probe_fraction: f64,
    pub repetitions: usize,
    pub mean_precision: f64,
    /// Population standard deviation over the runs.
    pub std_precision: f64,
    /// `(seed, precision)` per repetition.
    pub per_run: Vec<(u64, f64)>,
}

impl SweepReport {
    fn from_runs(network: &str, predictor: Predictor, fraction: f64, per_run: Vec<(u64, f64)>) -> Self {
        let count = per_run.len() as f64;
        let mean = per_run.iter().map(|r| r.1).sum::<f64>() / count;
        let var = per_run.iter().map(|r| (r.1 - mean) * (r.1 - mean)).sum::<f64>() / count;
        Self {
            network: network.into(),
            predictor,
            probe_fraction: fraction,
            repetitions: per_run.len(),
            mean_precision: mean,
            std_precision: libm::sqrt(var),
            per_run,
        }
    }
}

/// One split of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub fraction_index: usize,
    pub fraction: f64,
    pub repetition: usize,
    pub seed: u64,
}

/// Precision of every predictor on one cell's split, in predictor order.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub cell: SweepCell,
    pub precisions: Vec<f64>,
    pub warnings: Vec<(Predictor, ScoreWarning)>,
}

/// Grid of `(fraction, repetition)` splits evaluated for a list of predictors.
///
/// Cells are independent; [`SweepPlan::run_cell`] may be called in any order
/// or concurrently and [`SweepPlan::aggregate`] restores grid order.
#[derive(Debug, Clone)]
pub struct SweepPlan<'a> {
    pub network: &'a str,
    pub graph: &'a Graph,
    pub predictors: Vec<Predictor>,
    pub fractions: Vec<f64>,
    pub repetitions: usize,
    pub base_seed: u64,
    pub options: RpcaOptions,
}

impl<'a> SweepPlan<'a> {
    pub fn validate(&self) -> Result<()> {
        if self.predictors.is_empty() {
            return Err(invalid("sweep needs at least one predictor"));
        }
        if self.fractions.is_empty() {
            return Err(invalid("sweep needs at least one probe fraction"));
        }
        if let Some(f) = self.fractions.iter().find(|f| !(**f > 0.0 && **f < 1.0)) {
            return Err(invalid(format!("probe fraction {f} outside (0, 1)")));
        }
        if self.repetitions == 0 {
            return Err(invalid("sweep needs at least one repetition"));
        }
        self.options.validate()
    }

    /// Cells in grid order (fraction-major).
    pub fn cells(&self) -> Vec<SweepCell> {
        let mut cells = Vec::with_capacity(self.fractions.len() * self.repetitions);
        for (fi, &fraction) in self.fractions.iter().enumerate() {
            for rep in 0..self.repetitions {
                cells.push(SweepCell {
                    fraction_index: fi,
                    fraction,
                    repetition: rep,
                    seed: run_seed(self.base_seed, fi, rep),
                });
            }
        }
        cells
    }

    pub fn run_cell(&self, cell: SweepCell) -> Result<CellResult> {
        if self.graph.is_complete() {
            return Err(invalid("graph is complete: every pair is a link, nothing is left to predict"));
        }
        let split = split_train_probe(self.graph, cell.fraction, cell.seed)?;
        let mut precisions = Vec::with_capacity(self.predictors.len());
        let mut warnings = Vec::new();
        for &p in &self.predictors {
            let scored = score(&split.train, p, &self.options)?;
            let outcome = precision_at_probe(&scored.scores, &split.train, &split.probe)?;
            precisions.push(outcome.precision);
            warnings.extend(scored.warnings.into_iter().map(|w| (p, w)));
        }
        Ok(CellResult { cell, precisions, warnings })
    }

    /// Reports ordered predictor-major, then by fraction.
    pub fn aggregate(&self, results: &[CellResult]) -> Result<Vec<SweepReport>> {
        let mut reports = Vec::with_capacity(self.predictors.len() * self.fractions.len());
        for (pi, &p) in self.predictors.iter().enumerate() {
            for (fi, &fraction) in self.fractions.iter().enumerate() {
                let mut runs: Vec<(usize, u64, f64)> = results
                    .iter()
                    .filter(|r| r.cell.fraction_index == fi)
                    .map(|r| (r.cell.repetition, r.cell.seed, r.precisions[pi]))
                    .collect();
                runs.sort_by_key(|r| r.0);
                if runs.len() != self.repetitions {
                    return Err(invalid(format!(
                        "expected {} runs for fraction {fraction}, got {}",
                        self.repetitions,
                        runs.len()
                    )));
                }
                let per_run = runs.into_iter().map(|(_, seed, prec)| (seed, prec)).collect();
                reports.push(SweepReport::from_runs(self.network, p, fraction, per_run));
            }
        }
        Ok(reports)
    }
}

/// Sequential sweep over every `(predictor, fraction)` with `repetitions`
/// splits each.
pub fn sweep(
    network: &str,
    g: &Graph,
    predictors: &[Predictor],
    fractions: &[f64],
    repetitions: usize,
    base_seed: u64,
    opts: &RpcaOptions,
) -> Result<Vec<SweepReport>> {
    let plan = SweepPlan {
        network,
        graph: g,
        predictors: predictors.to_vec(),
        fractions: fractions.to_vec(),
        repetitions,
        base_seed,
        options: *opts,
    };
    plan.validate()?;
    let results = plan
        .cells()
        .into_iter()
        .map(|c| plan.run_cell(c))
        .collect::<Result<Vec<_>>>()?;
    plan.aggregate(&results)
}
