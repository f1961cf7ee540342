use super::ScoreMatrix;
use crate::error::Result;
use crate::graph::{adjacency_matrix, Graph};
use crate::linalg::DenseMatrix;
use crate::rpca::{solve_rpca, RpcaOptions};

/// Output of the low-rank predictor.
#[derive(Debug, Clone)]
pub struct LrPrediction {
    /// Backbone restricted to pairs absent from the training graph.
    pub scores: ScoreMatrix,
    /// Symmetrised backbone `X + X^T`.
    pub backbone: DenseMatrix,
    /// Symmetrised noise `E + E^T`.
    pub noise: DenseMatrix,
    pub iterations: usize,
    pub converged: bool,
    pub final_residual: f64,
    pub lambda: f64,
}

impl LrPrediction {
    /// Recovered network `G = X + A`: observed weights plus predicted links.
    pub fn recovered(&self, train: &Graph) -> Result<DenseMatrix> {
        self.scores.matrix().add(&adjacency_matrix(train))
    }
}

/// Low-rank link scores.
///
/// The training adjacency (weights used as-is) is split into backbone and
/// noise by robust PCA; both parts are symmetrised and the backbone is then
/// zeroed wherever the training graph already has a link, so only new links
/// carry a score.
pub fn lr_scores(train: &Graph, opts: &RpcaOptions) -> Result<LrPrediction> {
    let a = adjacency_matrix(train);
    let solution = solve_rpca(&a, opts)?;
    let backbone = solution.backbone.add(&solution.backbone.transpose())?;
    let noise = solution.noise.add(&solution.noise.transpose())?;

    let n = a.rows();
    let mut masked = backbone.clone();
    for i in 0..n {
        for j in 0..n {
            if a[(i, j)] != 0.0 {
                masked[(i, j)] = 0.0;
            }
        }
    }
    Ok(LrPrediction {
        scores: ScoreMatrix::new(masked, train)?,
        backbone,
        noise,
        iterations: solution.iterations,
        converged: solution.converged,
        final_residual: solution.final_residual,
        lambda: solution.lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_leaves_nothing_to_score() {
        let k4 = Graph::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let lr = lr_scores(&k4, &RpcaOptions::default()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(lr.scores.is_observed(i, j));
                    assert_eq!(lr.scores.score(i, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn four_cycle_diagonals_score_alike() {
        // a-b-c-d-a
        let c4 = Graph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let lr = lr_scores(&c4, &RpcaOptions::default()).unwrap();
        assert!(lr.converged);
        for (i, j) in [(0, 1), (1, 2), (2, 3), (0, 3)] {
            assert_eq!(lr.scores.score(i, j), 0.0);
            assert_eq!(lr.scores.score(j, i), 0.0);
        }
        let ac = lr.scores.score(0, 2);
        let bd = lr.scores.score(1, 3);
        assert!((ac - bd).abs() < 1e-6, "{ac} vs {bd}");
        assert_eq!(ac, lr.scores.score(2, 0));
    }

    #[test]
    fn observed_positions_always_zero() {
        let g = Graph::from_pairs(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (0, 3), (1, 4)]).unwrap();
        let lr = lr_scores(&g, &RpcaOptions::default()).unwrap();
        let a = adjacency_matrix(&g);
        for i in 0..6 {
            for j in 0..6 {
                if a[(i, j)] != 0.0 {
                    assert_eq!(lr.scores.score(i, j), 0.0);
                } else if i != j {
                    assert_eq!(lr.scores.score(i, j), lr.backbone[(i, j)]);
                }
            }
        }
        let g_rec = lr.recovered(&g).unwrap();
        assert_eq!(g_rec[(0, 1)], 1.0);
        assert_eq!(g_rec[(0, 2)], lr.backbone[(0, 2)]);
    }
}
