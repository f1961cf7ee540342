//! Undirected, optionally weighted graphs over labelled vertices.

mod parse;
mod split;
mod stats;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::linalg::DenseMatrix;

pub use parse::{parse_edge_list, ParseReport, ParsedGraph};
pub use split::{probe_size, split_train_probe, Split};
pub use stats::{network_stats, NetworkStats};

/// An undirected edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl Edge {
    /// Canonical orientation (`u < v`). Panics on a self-loop.
    pub fn new(a: usize, b: usize, weight: f64) -> Self {
        assert_ne!(a, b, "self-loop");
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Self { u, v, weight }
    }

    #[inline]
    pub fn pair(&self) -> (usize, usize) {
        (self.u, self.v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    labels: Vec<String>,
    edges: Vec<Edge>,
    weighted: bool,
    /// Per-vertex `(neighbor, weight)` lists sorted by neighbor index.
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl Graph {
    /// Validates and indexes an edge set. Edges may be given in either orientation.
    pub fn new(labels: Vec<String>, edges: Vec<Edge>, weighted: bool) -> Result<Self> {
        let n = labels.len();
        let mut seen = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.as_str(), i).is_some() {
                return Err(invalid(format!("duplicate vertex label {l:?}")));
            }
        }
        let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut canonical = Vec::with_capacity(edges.len());
        for e in edges {
            if e.u >= n || e.v >= n {
                return Err(invalid(format!("edge ({}, {}) references a vertex outside 0..{n}", e.u, e.v)));
            }
            if e.u == e.v {
                return Err(invalid(format!("self-loop at vertex {}", e.u)));
            }
            if !(e.weight > 0.0 && e.weight.is_finite()) {
                return Err(invalid(format!("edge ({}, {}) has non-positive weight {}", e.u, e.v, e.weight)));
            }
            let e = Edge::new(e.u, e.v, e.weight);
            adjacency[e.u].push((e.v, e.weight));
            adjacency[e.v].push((e.u, e.weight));
            canonical.push(e);
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(j, _)| j);
            if list.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(invalid("duplicate edge"));
            }
        }
        Ok(Self {
            labels,
            edges: canonical,
            weighted,
            adjacency,
        })
    }

    /// Graph on `0..n` labelled by the decimal index.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let labels = (0..n).map(|i| format!("{i}")).collect();
        let edges = pairs.iter().map(|&(a, b)| Edge { u: a, v: b, weight: 1.0 }).collect();
        Self::new(labels, edges, false)
    }

    /// Same vertex set, different edges.
    pub fn with_edges(&self, edges: Vec<Edge>) -> Result<Self> {
        Self::new(self.labels.clone(), edges, self.weighted)
    }

    /// Copy with every weight set to one.
    pub fn binarized(&self) -> Self {
        let edges = self.edges.iter().map(|e| Edge { weight: 1.0, ..*e }).collect();
        Self::new(self.labels.clone(), edges, false).expect("binarizing preserves validity")
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Sum of incident weights.
    pub fn strength(&self, v: usize) -> f64 {
        self.adjacency[v].iter().map(|&(_, w)| w).sum()
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<f64> {
        let list = self.adjacency.get(a)?;
        list.binary_search_by_key(&b, |&(j, _)| j).ok().map(|i| list[i].1)
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.weight(a, b).is_some()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertex_count();
        self.edge_count() == n * n.saturating_sub(1) / 2
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.vertex_count() {
            return Err(invalid(format!("vertex {v} out of range 0..{}", self.vertex_count())));
        }
        Ok(())
    }
}

/// Symmetric weighted adjacency with a zero diagonal.
pub fn adjacency_matrix(g: &Graph) -> DenseMatrix {
    let n = g.vertex_count();
    let mut a = DenseMatrix::zeros(n, n);
    for e in g.edges() {
        a[(e.u, e.v)] = e.weight;
        a[(e.v, e.u)] = e.weight;
    }
    a
}
