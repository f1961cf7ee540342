//! Link predictors.
//!
//! Every predictor turns a training graph into a symmetric [`ScoreMatrix`];
//! higher scores mean "more likely to be a missing link". The low-rank
//! predictor ([`lr_scores`]) scores pairs from the robust-PCA backbone, the
//! rest are local neighbourhood indices ([`similarity_scores`]).

mod lr;
mod similarity;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::linalg::DenseMatrix;
use crate::rpca::RpcaOptions;

pub use lr::{lr_scores, LrPrediction};
pub use similarity::{common_neighbors, similarity_scores};

/// Symmetric pair scores over a training graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    scores: DenseMatrix,
    /// Row-major `n x n`; true where the training graph has an edge.
    observed: Vec<bool>,
}

impl ScoreMatrix {
    pub fn new(scores: DenseMatrix, train: &Graph) -> Result<Self> {
        let n = train.vertex_count();
        if scores.rows() != n || scores.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n}"),
                found: format!("{}x{}", scores.rows(), scores.cols()),
            });
        }
        let mut observed = alloc::vec![false; n * n];
        for e in train.edges() {
            observed[e.u * n + e.v] = true;
            observed[e.v * n + e.u] = true;
        }
        Ok(Self { scores, observed })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.scores.rows()
    }

    #[inline]
    pub fn score(&self, i: usize, j: usize) -> f64 {
        self.scores[(i, j)]
    }

    #[inline]
    pub fn is_observed(&self, i: usize, j: usize) -> bool {
        self.observed[i * self.n() + j]
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.scores
    }
}

/// Local similarity indices. The first six use topology only; the `W*`
/// forms sum edge weights and the `Rw*` forms multiply them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimilarityKind {
    CommonNeighbors,
    AdamicAdar,
    ResourceAllocation,
    Car,
    Caa,
    Cra,
    WeightedCommonNeighbors,
    WeightedAdamicAdar,
    WeightedResourceAllocation,
    ReliableWeightedCommonNeighbors,
    ReliableWeightedAdamicAdar,
    ReliableWeightedResourceAllocation,
}

impl SimilarityKind {
    pub const ALL: [SimilarityKind; 12] = [
        Self::CommonNeighbors,
        Self::AdamicAdar,
        Self::ResourceAllocation,
        Self::Car,
        Self::Caa,
        Self::Cra,
        Self::WeightedCommonNeighbors,
        Self::WeightedAdamicAdar,
        Self::WeightedResourceAllocation,
        Self::ReliableWeightedCommonNeighbors,
        Self::ReliableWeightedAdamicAdar,
        Self::ReliableWeightedResourceAllocation,
    ];

    pub fn uses_weights(self) -> bool {
        matches!(
            self,
            Self::WeightedCommonNeighbors
                | Self::WeightedAdamicAdar
                | Self::WeightedResourceAllocation
                | Self::ReliableWeightedCommonNeighbors
                | Self::ReliableWeightedAdamicAdar
                | Self::ReliableWeightedResourceAllocation
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::CommonNeighbors => "cn",
            Self::AdamicAdar => "aa",
            Self::ResourceAllocation => "ra",
            Self::Car => "car",
            Self::Caa => "caa",
            Self::Cra => "cra",
            Self::WeightedCommonNeighbors => "wcn",
            Self::WeightedAdamicAdar => "waa",
            Self::WeightedResourceAllocation => "wra",
            Self::ReliableWeightedCommonNeighbors => "rwcn",
            Self::ReliableWeightedAdamicAdar => "rwaa",
            Self::ReliableWeightedResourceAllocation => "rwra",
        }
    }
}

/// Any of the thirteen predictors: the low-rank method or a similarity index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predictor {
    LowRank,
    Similarity(SimilarityKind),
}

impl Predictor {
    pub fn all() -> impl Iterator<Item = Predictor> {
        core::iter::once(Predictor::LowRank).chain(SimilarityKind::ALL.into_iter().map(Predictor::Similarity))
    }

    pub fn name(self) -> &'static str {
        match self {
            Predictor::LowRank => "lr",
            Predictor::Similarity(kind) => kind.name(),
        }
    }

    /// Comma-separated list of accepted names.
    pub fn valid_names() -> String {
        let names: Vec<&str> = Self::all().map(Self::name).collect();
        names.join(", ")
    }
}

impl fmt::Display for Predictor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Predictor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_lowercase();
        Self::all()
            .find(|p| p.name() == wanted)
            .ok_or_else(|| invalid(format!("unknown predictor {s:?}; valid names: {}", Self::valid_names())))
    }
}

/// Non-fatal conditions met while scoring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScoreWarning {
    /// A weighted index ran on an unweighted graph, so every weight was 1.
    UnitWeights,
    /// Robust PCA stopped at the iteration cap.
    NotConverged { iterations: usize, residual: f64 },
    /// The whole training matrix went to the noise part, so every candidate
    /// scores 0 and the ranking is decided by the tie-break alone.
    ZeroBackbone { lambda: f64 },
}

impl fmt::Display for ScoreWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScoreWarning::UnitWeights => {
                f.write_str("weighted index evaluated on an unweighted graph (unit weights)")
            }
            ScoreWarning::NotConverged { iterations, residual } => write!(
                f,
                "robust PCA did not converge after {iterations} iterations (residual {residual:.3e})"
            ),
            ScoreWarning::ZeroBackbone { lambda } => write!(
                f,
                "backbone is zero at lambda {lambda:.4}; every candidate ties, a larger lambda keeps more structure"
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scored {
    pub scores: ScoreMatrix,
    pub warnings: Vec<ScoreWarning>,
}

/// Scores `train` with any predictor.
pub fn score(train: &Graph, predictor: Predictor, opts: &RpcaOptions) -> Result<Scored> {
    match predictor {
        Predictor::LowRank => {
            let lr = lr_scores(train, opts)?;
            let mut warnings = Vec::new();
            if !lr.converged {
                warnings.push(ScoreWarning::NotConverged {
                    iterations: lr.iterations,
                    residual: lr.final_residual,
                });
            }
            if lr.backbone.max_abs() == 0.0 {
                warnings.push(ScoreWarning::ZeroBackbone { lambda: lr.lambda });
            }
            Ok(Scored { scores: lr.scores, warnings })
        }
        Predictor::Similarity(kind) => {
            let scores = similarity_scores(train, kind)?;
            let mut warnings = Vec::new();
            if kind.uses_weights() && !train.is_weighted() {
                warnings.push(ScoreWarning::UnitWeights);
            }
            Ok(Scored { scores, warnings })
        }
    }
}
