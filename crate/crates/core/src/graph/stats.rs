use alloc::vec::Vec;

use super::{adjacency_matrix, Graph};
use crate::error::{Error, Result};
use crate::linalg::numerical_rank;

/// Structural summary of a network.
///
/// `clustering` and `assortativity` are `None` when undefined (fewer than
/// three vertices, or zero degree variance across edge ends).
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkStats {
    pub n_vertices: usize,
    pub n_edges: usize,
    /// Mean local clustering coefficient; vertices of degree < 2 count as 0.
    pub clustering: Option<f64>,
    /// Pearson correlation of the degrees at either end of an edge.
    pub assortativity: Option<f64>,
    pub avg_degree: f64,
    /// `<k^2> / <k>^2`.
    pub heterogeneity: f64,
    /// Numerical rank of the binary adjacency matrix.
    pub rank: usize,
    pub rank_ratio: f64,
    pub density: f64,
}

pub fn network_stats(g: &Graph) -> Result<NetworkStats> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::NoEdges);
    }
    let degrees: Vec<f64> = (0..n).map(|v| g.degree(v) as f64).collect();
    let mean_k = degrees.iter().sum::<f64>() / n as f64;
    let mean_k2 = degrees.iter().map(|k| k * k).sum::<f64>() / n as f64;

    let rank = numerical_rank(&adjacency_matrix(&g.binarized()))?;

    Ok(NetworkStats {
        n_vertices: n,
        n_edges: m,
        clustering: (n >= 3).then(|| average_clustering(g)),
        assortativity: if n >= 3 { degree_assortativity(g) } else { None },
        avg_degree: 2.0 * m as f64 / n as f64,
        heterogeneity: mean_k2 / (mean_k * mean_k),
        rank,
        rank_ratio: rank as f64 / n as f64,
        density: 2.0 * m as f64 / (n as f64 * (n as f64 - 1.0)),
    })
}

fn local_clustering(g: &Graph, v: usize) -> f64 {
    let nbrs = g.neighbors(v);
    let k = nbrs.len();
    if k < 2 {
        return 0.0;
    }
    let mut links = 0usize;
    for (i, &(a, _)) in nbrs.iter().enumerate() {
        for &(b, _) in &nbrs[i + 1..] {
            if g.has_edge(a, b) {
                links += 1;
            }
        }
    }
    2.0 * links as f64 / (k * (k - 1)) as f64
}

pub(crate) fn average_clustering(g: &Graph) -> f64 {
    let n = g.vertex_count();
    (0..n).map(|v| local_clustering(g, v)).sum::<f64>() / n as f64
}

pub(crate) fn degree_assortativity(g: &Graph) -> Option<f64> {
    let m = g.edge_count() as f64;
    let (mut product, mut half_sum, mut half_squares) = (0.0, 0.0, 0.0);
    for e in g.edges() {
        let j = g.degree(e.u) as f64;
        let k = g.degree(e.v) as f64;
        product += j * k;
        half_sum += 0.5 * (j + k);
        half_squares += 0.5 * (j * j + k * k);
    }
    let mean = half_sum / m;
    let numerator = product / m - mean * mean;
    let denominator = half_squares / m - mean * mean;
    if denominator.abs() <= 1e-12 * (half_squares / m).max(1.0) {
        return None;
    }
    Some(numerator / denominator)
}
