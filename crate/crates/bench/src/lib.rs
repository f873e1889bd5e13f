//! Fixtures shared by the benchmarks.

use tripack::generators::{gnp, regular_bipartite};
use tripack::{Graph, Seed, VertexSet};

pub fn dense_gnp(n: usize) -> Graph {
    gnp(n, 0.5, Seed(1)).expect("valid probability")
}

/// A `3n/4`-regular bipartite graph with sides of size `n`.
pub fn matching_host(n: usize) -> (Graph, VertexSet, VertexSet) {
    regular_bipartite(n, 3 * n / 4, Seed(2)).expect("degree fits")
}
