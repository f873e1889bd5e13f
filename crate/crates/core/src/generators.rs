//! Seedable random models and the deterministic constructions.
//!
//! Random sampling is keyed per row: the pairs `(u, v)` with `v` in the row's
//! candidate list are drawn from the stream `seed.derive(u)` by geometric
//! skipping, so a row's edges never depend on how other rows were sampled.

use rand::seq::SliceRandom;

use crate::error::{check_probability, invalid, Result};
use crate::graph::{Graph, GraphBuilder, VertexSet};
use crate::rng::Seed;

/// Adds each pair `(u, candidates[i])` independently with probability `p`,
/// using the row stream for `u`.
fn sample_row(b: &mut GraphBuilder, u: usize, candidates: &[usize], p: f64, seed: Seed) {
    if p <= 0.0 || candidates.is_empty() {
        return;
    }
    if p >= 1.0 {
        for &v in candidates {
            b.add(u, v);
        }
        return;
    }
    let mut rng = seed.derive(u as u64).rng();
    let log1mp = (-p).ln_1p();
    let mut i = rng.geometric_skip(log1mp);
    while (i as usize) < candidates.len() {
        b.add(u, candidates[i as usize]);
        i = i.saturating_add(1).saturating_add(rng.geometric_skip(log1mp));
    }
}

/// Binomial random graph G(n, p).
pub fn gnp(n: usize, p: f64, seed: Seed) -> Result<Graph> {
    check_probability(p)?;
    let mut b = GraphBuilder::new(n);
    let all: Vec<usize> = (0..n).collect();
    for u in 0..n {
        sample_row(&mut b, u, &all[u + 1..], p, seed);
    }
    Ok(b.build())
}

/// Random bipartite graph: only `a`–`b` pairs, each with probability `p`.
pub fn random_bipartite(a: &VertexSet, b: &VertexSet, p: f64, seed: Seed) -> Result<Graph> {
    check_probability(p)?;
    if a.universe() != b.universe() {
        return Err(invalid("vertex sets over different universes"));
    }
    if !a.is_disjoint(b) {
        return Err(invalid("random_bipartite sides overlap"));
    }
    let mut g = GraphBuilder::new(a.universe());
    let cands = b.to_vec();
    for u in a.iter() {
        sample_row(&mut g, u, &cands, p, seed);
    }
    Ok(g.build())
}

/// K_{m, n−m} with parts `0..m` and `m..n`.
pub fn complete_bipartite(m: usize, n: usize) -> Result<Graph> {
    if m == 0 || m >= n {
        return Err(invalid(format!("complete_bipartite needs 1 ≤ m < n, got m = {m}, n = {n}")));
    }
    let mut b = GraphBuilder::new(n);
    for u in 0..m {
        for v in m..n {
            b.add(u, v);
        }
    }
    Ok(b.build())
}

/// Complete multipartite graph with consecutive parts of the given sizes.
pub fn complete_multipartite(sizes: &[usize]) -> Graph {
    let n: usize = sizes.iter().sum();
    let mut part = Vec::with_capacity(n);
    for (i, &s) in sizes.iter().enumerate() {
        part.extend(std::iter::repeat_n(i, s));
    }
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if part[u] != part[v] {
                b.add(u, v);
            }
        }
    }
    b.build()
}

/// `copies` vertex-disjoint copies of K_{side, side}. Copy `i` occupies
/// `2·side·i ..`, left half first.
pub fn disjoint_complete_bipartite(copies: usize, side: usize) -> Graph {
    let n = 2 * side * copies;
    let mut b = GraphBuilder::new(n);
    for c in 0..copies {
        let base = 2 * side * c;
        for u in base..base + side {
            for v in base + side..base + 2 * side {
                b.add(u, v);
            }
        }
    }
    b.build()
}

fn k4_sizes(n: usize, m: usize) -> Result<(usize, usize)> {
    if !n.is_multiple_of(4) {
        return Err(invalid(format!("k4_counterexample needs 4 | n, got n = {n}")));
    }
    if m == 0 || n / 4 <= m {
        return Err(invalid(format!("k4_counterexample needs |A| = n/4 − m ≥ 1, got n = {n}, m = {m}")));
    }
    let a = n / 4 - m;
    let b = n - a;
    if !b.is_multiple_of(2 * m) {
        return Err(invalid(format!("|B| = {b} is not divisible by 2m = {}", 2 * m)));
    }
    Ok((a, b))
}

/// Sides `(A, B)` of [`k4_counterexample`]: `A = 0..n/4−m`, `B` the rest.
pub fn k4_sides(n: usize, m: usize) -> Result<(VertexSet, VertexSet)> {
    let (a, _) = k4_sizes(n, m)?;
    Ok((VertexSet::range(n, 0..a), VertexSet::range(n, a..n)))
}

/// Independent `A` of size n/4 − m joined completely to `B`, which is a
/// disjoint union of K_{m,m}. Minimum degree n/4.
pub fn k4_counterexample(n: usize, m: usize) -> Result<Graph> {
    let (a, _) = k4_sizes(n, m)?;
    let mut g = GraphBuilder::new(n);
    for u in 0..a {
        for v in a..n {
            g.add(u, v);
        }
    }
    for base in (a..n).step_by(2 * m) {
        for u in base..base + m {
            for v in base + m..base + 2 * m {
                g.add(u, v);
            }
        }
    }
    Ok(g.build())
}

/// `⌈x⌉` tolerant of floating error just above an integer.
pub(crate) fn ceil_tol(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

/// `⌊x⌋` tolerant of floating error just below an integer.
pub(crate) fn floor_tol(x: f64) -> usize {
    (x + 1e-9).floor().max(0.0) as usize
}

/// K_{⌈αn⌉, n−⌈αn⌉} (A first) with `⌊defect_fraction·|A|⌋` randomly chosen
/// A-vertices cut down to exactly `⌈αn/4⌉` random neighbours in B.
///
/// Each removed edge costs a B-vertex at most one unit per degraded A-vertex,
/// so the number of degraded vertices must not exceed `βn`.
pub fn stable_model(
    n: usize,
    alpha: f64,
    beta: f64,
    defect_fraction: f64,
    seed: Seed,
) -> Result<(Graph, VertexSet, VertexSet)> {
    if !(alpha > 0.0 && alpha <= 1.0 / 3.0 + 1e-12) {
        return Err(invalid(format!("alpha = {alpha} outside (0, 1/3]")));
    }
    if !(0.0..1.0 / 12.0).contains(&beta) {
        return Err(invalid(format!("beta = {beta} outside [0, 1/12)")));
    }
    if !(0.0..=1.0).contains(&defect_fraction) {
        return Err(invalid(format!("defect_fraction = {defect_fraction} outside [0, 1]")));
    }
    let a_size = ceil_tol(alpha * n as f64);
    if a_size == 0 || a_size >= n {
        return Err(invalid(format!("⌈αn⌉ = {a_size} leaves an empty side for n = {n}")));
    }
    let degraded = floor_tol(defect_fraction * a_size as f64);
    let budget = floor_tol(beta * n as f64);
    if degraded > budget {
        return Err(invalid(format!("{degraded} degraded vertices exceed βn = {budget}")));
    }
    let floor = ceil_tol(alpha * n as f64 / 4.0);
    let a = VertexSet::range(n, 0..a_size);
    let b = VertexSet::range(n, a_size..n);
    let mut g = GraphBuilder::new(n);
    for u in 0..a_size {
        for v in a_size..n {
            g.add(u, v);
        }
    }
    let mut rng = seed.derive_str("stable_model").rng();
    let mut a_order: Vec<usize> = (0..a_size).collect();
    a_order.shuffle(&mut rng);
    let mut b_order: Vec<usize> = (a_size..n).collect();
    for &u in &a_order[..degraded] {
        b_order.shuffle(&mut rng);
        for &v in &b_order[floor.min(b_order.len())..] {
            g.remove_edge(u, v);
        }
    }
    let g = g.build();
    let report = crate::stability::verify_stability(&g, &a, &b, alpha, beta)?;
    if !report.holds {
        return Err(invalid(format!("parameters admit no stable model: {}", report.summary())));
    }
    Ok((g, a, b))
}

/// Random cherry fixture: parts `U`, `V`, `W` laid out consecutively, with
/// `U`–`V` and `V`–`W` pairs each present with probability `p_cross` and no
/// other edges.
pub fn random_cherry_graph(
    u_size: usize,
    v_size: usize,
    w_size: usize,
    p_cross: f64,
    seed: Seed,
) -> Result<(Graph, VertexSet, VertexSet, VertexSet)> {
    let n = u_size + v_size + w_size;
    let u = VertexSet::range(n, 0..u_size);
    let v = VertexSet::range(n, u_size..u_size + v_size);
    let w = VertexSet::range(n, u_size + v_size..n);
    let uv = random_bipartite(&u, &v, p_cross, seed.derive(1))?;
    let vw = random_bipartite(&v, &w, p_cross, seed.derive(2))?;
    Ok((uv.union(&vw)?, u, v, w))
}

/// Bipartite graph with both sides of size `side` and every degree exactly
/// `deg`: a circulant band, with the right side randomly relabelled.
/// Left side is `0..side`, right side `side..2·side`.
pub fn regular_bipartite(side: usize, deg: usize, seed: Seed) -> Result<(Graph, VertexSet, VertexSet)> {
    if deg > side {
        return Err(invalid(format!("degree {deg} exceeds side size {side}")));
    }
    let n = 2 * side;
    let mut perm: Vec<usize> = (0..side).collect();
    perm.shuffle(&mut seed.derive_str("regular_bipartite").rng());
    let mut g = GraphBuilder::new(n);
    for i in 0..side {
        for k in 0..deg {
            g.add(i, side + perm[(i + k) % side]);
        }
    }
    Ok((g.build(), VertexSet::range(n, 0..side), VertexSet::range(n, side..n)))
}

/// Keeps each edge of `g` independently with probability `p`.
pub fn edge_subsample(g: &Graph, p: f64, seed: Seed) -> Result<Graph> {
    check_probability(p)?;
    let mut b = GraphBuilder::new(g.n());
    for u in 0..g.n() {
        let cands: Vec<usize> = g.neighbors(u).filter(|&v| v > u).collect();
        sample_row(&mut b, u, &cands, p, seed);
    }
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::count_triangles;

    #[test]
    fn gnp_extremes_and_determinism() {
        assert_eq!(gnp(20, 0.0, Seed(1)).unwrap().edge_count(), 0);
        assert_eq!(gnp(20, 1.0, Seed(1)).unwrap(), Graph::complete(20));
        assert!(gnp(5, 1.5, Seed(1)).is_err());
        assert!(gnp(5, -0.1, Seed(1)).is_err());
        assert_eq!(gnp(200, 0.1, Seed(9)).unwrap(), gnp(200, 0.1, Seed(9)).unwrap());
        assert_ne!(gnp(200, 0.1, Seed(9)).unwrap(), gnp(200, 0.1, Seed(10)).unwrap());
    }

    #[test]
    fn random_bipartite_basics() {
        let a = VertexSet::range(10, 0..4);
        let b = VertexSet::range(10, 4..10);
        let full = random_bipartite(&a, &b, 1.0, Seed(0)).unwrap();
        assert_eq!(full.edge_count(), 24);
        assert_eq!(random_bipartite(&a, &b, 0.0, Seed(0)).unwrap().edge_count(), 0);
        assert!(random_bipartite(&a, &VertexSet::range(10, 3..10), 0.5, Seed(0)).is_err());
        let g = random_bipartite(&a, &b, 0.5, Seed(3)).unwrap();
        assert!(g.edges().all(|(u, v)| a.contains(u) && b.contains(v)));
    }

    #[test]
    fn complete_bipartite_examples() {
        let g = complete_bipartite(2, 6).unwrap();
        assert_eq!((g.min_degree(), g.edge_count()), (2, 8));
        assert_eq!(complete_bipartite(1, 3).unwrap().edge_count(), 2);
        assert_eq!(count_triangles(&complete_bipartite(100, 300).unwrap(), None), 0);
        assert!(complete_bipartite(3, 3).is_err());
        assert!(complete_bipartite(0, 3).is_err());
    }

    #[test]
    fn multipartite_min_degree() {
        for sizes in [vec![2, 2, 2], vec![1, 4, 4], vec![3, 3], vec![5, 1, 2, 7]] {
            let g = complete_multipartite(&sizes);
            let n: usize = sizes.iter().sum();
            assert_eq!(g.min_degree(), n - sizes.iter().max().unwrap());
        }
        assert_eq!(count_triangles(&complete_multipartite(&[3, 3]), None), 0);
    }

    #[test]
    fn k4_counterexample_examples() {
        let g = k4_counterexample(80, 4).unwrap();
        assert_eq!(g.min_degree(), 20);
        let (a, b) = k4_sides(80, 4).unwrap();
        assert_eq!((a.len(), b.len()), (16, 64));
        assert_eq!(count_triangles(&g, Some(&b)), 0);
        assert!(a.iter().all(|u| g.deg_in(u, &a) == 0));
        assert!(k4_counterexample(160, 10).is_err());
        assert!(k4_counterexample(81, 4).is_err());
    }

    #[test]
    fn stable_model_examples() {
        let (g, a, b) = stable_model(300, 1.0 / 3.0, 0.0, 0.0, Seed(1)).unwrap();
        assert_eq!(g, complete_bipartite(100, 300).unwrap());
        assert_eq!((a.len(), b.len()), (100, 200));

        let beta = 0.05;
        let (g, a, b) = stable_model(300, 1.0 / 3.0, beta, 0.05, Seed(7)).unwrap();
        let low = a.iter().filter(|&v| (g.deg_in(v, &b) as f64) < b.len() as f64 - beta * 300.0).count();
        assert_eq!(low, 5);
        assert!(a.iter().all(|v| g.deg_in(v, &b) >= 25));

        assert!(stable_model(300, 0.5, 0.05, 0.0, Seed(1)).is_err());
        assert!(stable_model(300, 0.3, 0.1, 0.0, Seed(1)).is_err());
        assert!(stable_model(300, 1.0 / 3.0, 0.01, 0.5, Seed(1)).is_err());
    }

    #[test]
    fn regular_bipartite_degrees() {
        let (g, a, b) = regular_bipartite(50, 30, Seed(2)).unwrap();
        assert!(a.iter().chain(b.iter()).all(|v| g.degree(v) == 30));
    }

    #[test]
    fn subsample_is_a_subgraph() {
        let g = gnp(60, 0.3, Seed(4)).unwrap();
        let h = edge_subsample(&g, 0.5, Seed(5)).unwrap();
        assert!(h.edges().all(|(u, v)| g.has_edge(u, v)));
        assert_eq!(edge_subsample(&g, 1.0, Seed(5)).unwrap(), g);
    }
}
