//! Seeded random graphs and vertex sets for property tests and benchmarks.

use rand::seq::index::sample;
use rand::Rng;

use crate::graph::{Graph, VertexSet};

/// Each ordered pair `(i, j)`, `i != j`, is an edge with probability `density`.
pub fn random_graph(rng: &mut impl Rng, n: usize, density: f64) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .filter(|_| rng.random_bool(density))
        .collect();
    Graph::from_edges(n, edges).expect("generated edges are valid")
}

/// Each vertex is included with probability `p`.
pub fn random_subset(rng: &mut impl Rng, n: usize, p: f64) -> VertexSet {
    (0..n).filter(|_| rng.random_bool(p)).collect()
}

/// A uniformly random subset with exactly `k` of the `n` vertices.
pub fn random_subset_of_size(rng: &mut impl Rng, n: usize, k: usize) -> VertexSet {
    sample(rng, n, k.min(n)).into_iter().collect()
}
