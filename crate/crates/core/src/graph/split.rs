use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Edge, Graph};
use crate::error::{invalid, Result};

/// Partition of a graph's edges into a training graph and a held-out probe set.
#[derive(Debug, Clone)]
pub struct Split {
    /// Same vertex set as the source graph, probe edges removed.
    pub train: Graph,
    /// Held-out edges, in source order.
    pub probe: Vec<Edge>,
    pub seed: u64,
    pub probe_fraction: f64,
}

impl Split {
    /// Train plus probe edges, in source order.
    pub fn reassemble(&self, original_order: &Graph) -> Result<Graph> {
        let mut edges: Vec<Edge> = self.train.edges().iter().chain(&self.probe).copied().collect();
        let order: BTreeMap<(usize, usize), usize> = original_order
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| (e.pair(), i))
            .collect();
        edges.sort_by_key(|e| order.get(&e.pair()).copied().unwrap_or(usize::MAX));
        self.train.with_edges(edges)
    }
}

/// Probe size `round(fraction * |E|)` with ties to even.
pub fn probe_size(edge_count: usize, fraction: f64) -> usize {
    libm::rint(fraction * edge_count as f64) as usize
}

/// Holds out `round(fraction * |E|)` edges chosen uniformly without replacement.
///
/// The choice is a pure function of `(g, fraction, seed)`.
pub fn split_train_probe(g: &Graph, fraction: f64, seed: u64) -> Result<Split> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(invalid(format!("probe fraction must lie in (0, 1), got {fraction}")));
    }
    let m = g.edge_count();
    if m < 2 {
        return Err(invalid(format!("splitting needs at least 2 edges, graph has {m}")));
    }
    let k = probe_size(m, fraction);
    if k == 0 || k == m {
        return Err(invalid(format!(
            "probe fraction {fraction} gives {k} of {m} edges; both sides must be non-empty"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut held_out = alloc::vec![false; m];
    for idx in rand::seq::index::sample(&mut rng, m, k) {
        held_out[idx] = true;
    }
    let (mut probe, mut train) = (Vec::with_capacity(k), Vec::with_capacity(m - k));
    for (e, &held) in g.edges().iter().zip(&held_out) {
        if held {
            probe.push(*e);
        } else {
            train.push(*e);
        }
    }
    Ok(Split {
        train: g.with_edges(train)?,
        probe,
        seed,
        probe_fraction: fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(n: usize) -> Graph {
        let pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_pairs(n, &pairs).unwrap()
    }

    #[test]
    fn probe_size_rounds_half_to_even() {
        assert_eq!(probe_size(2742, 0.10), 274);
        assert_eq!(probe_size(5, 0.5), 2);
        assert_eq!(probe_size(7, 0.5), 4);
        assert_eq!(probe_size(10, 0.25), 2);
    }

    #[test]
    fn half_of_four_edges() {
        for seed in 0..20 {
            let s = split_train_probe(&ring(4), 0.5, seed).unwrap();
            assert_eq!(s.probe.len(), 2);
            assert_eq!(s.train.edge_count(), 2);
            assert_eq!(s.train.vertex_count(), 4);
        }
    }

    #[test]
    fn same_seed_same_split() {
        let g = ring(30);
        let a = split_train_probe(&g, 0.2, 99).unwrap();
        let b = split_train_probe(&g, 0.2, 99).unwrap();
        assert_eq!(a.probe, b.probe);
        assert_eq!(a.train, b.train);
        let c = split_train_probe(&g, 0.2, 100).unwrap();
        assert_ne!(a.probe, c.probe);
    }

    #[test]
    fn degenerate_requests_are_rejected() {
        let g = ring(5);
        assert!(split_train_probe(&g, 0.0, 1).is_err());
        assert!(split_train_probe(&g, 1.0, 1).is_err());
        assert!(split_train_probe(&g, 0.05, 1).is_err());
        assert!(split_train_probe(&g, 0.95, 1).is_err());
        assert!(split_train_probe(&Graph::from_pairs(2, &[(0, 1)]).unwrap(), 0.5, 1).is_err());
    }

    proptest! {
        #[test]
        fn splits_partition_the_edges(
            n in 4usize..25,
            density in 0.2f64..0.9,
            fraction in 0.05f64..0.6,
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rand::Rng::random_bool(&mut rng, density) {
                        let w = rand::Rng::random_range(&mut rng, 0.5..3.0);
                        edges.push(Edge::new(j, i, w));
                    }
                }
            }
            let labels = (0..n).map(|i| format!("v{i}")).collect();
            let g = Graph::new(labels, edges, true).unwrap();
            let k = probe_size(g.edge_count(), fraction);
            prop_assume!(g.edge_count() >= 2 && k > 0 && k < g.edge_count());

            let s = split_train_probe(&g, fraction, seed).unwrap();
            prop_assert_eq!(s.probe.len(), k);
            for e in &s.probe {
                prop_assert!(!s.train.has_edge(e.u, e.v));
            }
            prop_assert_eq!(s.reassemble(&g).unwrap(), g);
        }
    }
}
