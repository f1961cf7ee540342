//! Local neighbourhood indices.
//!
//! For a pair `(x, y)` with common neighbours `Z`, degree `k_z`, strength
//! `s_z` and edge weights `w`:
//!
//! | index | score |
//! |-------|-------|
//! | CN    | `|Z|` |
//! | AA    | `sum 1 / ln k_z` |
//! | RA    | `sum 1 / k_z` |
//! | CAR   | `CN * LCL`, `LCL = sum_z |g(z)| / 2` |
//! | CAA   | `sum |g(z)| / log2 k_z` |
//! | CRA   | `sum |g(z)| / k_z` |
//! | WCN   | `sum (w_xz + w_zy)` |
//! | WAA   | `sum (w_xz + w_zy) / ln(1 + s_z)` |
//! | WRA   | `sum (w_xz + w_zy) / s_z` |
//! | rWCN  | `sum w_xz * w_zy` |
//! | rWAA  | `sum w_xz * w_zy / ln(1 + s_z)` |
//! | rWRA  | `sum w_xz * w_zy / s_z` |
//!
//! `g(z)` is the set of links from `z` to the other members of `Z`. Terms
//! with `k_z = 1` are skipped in the logarithmic indices.

use alloc::vec;
use alloc::vec::Vec;

use super::{ScoreMatrix, SimilarityKind};
use crate::error::Result;
use crate::graph::Graph;
use crate::linalg::DenseMatrix;

/// A common neighbour `z` of `(x, y)` with the two connecting weights.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Shared {
    z: usize,
    w_xz: f64,
    w_zy: f64,
}

/// Sorted merge of the two neighbour lists.
fn shared_neighbors(g: &Graph, x: usize, y: usize, out: &mut Vec<Shared>) {
    out.clear();
    let (a, b) = (g.neighbors(x), g.neighbors(y));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                out.push(Shared { z: a[i].0, w_xz: a[i].1, w_zy: b[j].1 });
                i += 1;
                j += 1;
            }
        }
    }
}

/// `Γ(x) ∩ Γ(y)` in ascending vertex order.
pub fn common_neighbors(g: &Graph, x: usize, y: usize) -> Result<Vec<usize>> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Err(crate::error::invalid("common neighbours need two distinct vertices"));
    }
    let mut shared = Vec::new();
    shared_neighbors(g, x, y, &mut shared);
    Ok(shared.into_iter().map(|s| s.z).collect())
}

/// Number of links between `z` and the other common neighbours.
fn community_links(g: &Graph, z: usize, shared: &[Shared]) -> usize {
    shared.iter().filter(|s| s.z != z && g.has_edge(z, s.z)).count()
}

fn pair_score(g: &Graph, kind: SimilarityKind, shared: &[Shared]) -> f64 {
    use SimilarityKind::*;
    let degree = |z: usize| g.degree(z) as f64;
    match kind {
        CommonNeighbors => shared.len() as f64,
        AdamicAdar => shared
            .iter()
            .filter(|s| g.degree(s.z) > 1)
            .map(|s| 1.0 / libm::log(degree(s.z)))
            .sum(),
        ResourceAllocation => shared.iter().map(|s| 1.0 / degree(s.z)).sum(),
        Car => {
            let links: usize = shared.iter().map(|s| community_links(g, s.z, shared)).sum();
            shared.len() as f64 * (links as f64 / 2.0)
        }
        Caa => shared
            .iter()
            .filter(|s| g.degree(s.z) > 1)
            .map(|s| community_links(g, s.z, shared) as f64 / libm::log2(degree(s.z)))
            .sum(),
        Cra => shared
            .iter()
            .map(|s| community_links(g, s.z, shared) as f64 / degree(s.z))
            .sum(),
        WeightedCommonNeighbors => shared.iter().map(|s| s.w_xz + s.w_zy).sum(),
        WeightedAdamicAdar => shared
            .iter()
            .map(|s| (s.w_xz + s.w_zy) / libm::log(1.0 + g.strength(s.z)))
            .sum(),
        WeightedResourceAllocation => shared.iter().map(|s| (s.w_xz + s.w_zy) / g.strength(s.z)).sum(),
        ReliableWeightedCommonNeighbors => shared.iter().map(|s| s.w_xz * s.w_zy).sum(),
        ReliableWeightedAdamicAdar => shared
            .iter()
            .map(|s| s.w_xz * s.w_zy / libm::log(1.0 + g.strength(s.z)))
            .sum(),
        ReliableWeightedResourceAllocation => shared.iter().map(|s| s.w_xz * s.w_zy / g.strength(s.z)).sum(),
    }
}

/// Scores every vertex pair with a local index. Pairs without common
/// neighbours score 0; observed pairs are scored too.
pub fn similarity_scores(train: &Graph, kind: SimilarityKind) -> Result<ScoreMatrix> {
    let n = train.vertex_count();
    let mut scores = DenseMatrix::zeros(n, n);
    let mut two_hop = vec![usize::MAX; n];
    let mut shared = Vec::new();
    for x in 0..n {
        for &(z, _) in train.neighbors(x) {
            for &(y, _) in train.neighbors(z) {
                if y <= x || two_hop[y] == x {
                    continue;
                }
                two_hop[y] = x;
                shared_neighbors(train, x, y, &mut shared);
                let s = pair_score(train, kind, &shared);
                scores[(x, y)] = s;
                scores[(y, x)] = s;
            }
        }
    }
    ScoreMatrix::new(scores, train)
}
