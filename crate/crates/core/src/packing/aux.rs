//! Auxiliary graphs for cherries: the good-pair graph `F`, its restriction to
//! pairs good for a set `X`, the random greedy matching in a revealed `F`,
//! and the matching-versus-centre graph `H(M, V)`.

use rand::seq::SliceRandom;

use crate::error::{invalid, same_universe, Result};
use crate::generators::edge_subsample;
use crate::graph::{Graph, GraphBuilder, VertexSet};
use crate::oracle::{Matching, TrianglePacking};
use crate::rng::Seed;

const TOL: f64 = 1e-9;

/// `uw ∈ F` iff `u ∈ U`, `w ∈ W` have at least `d²|V|/2` common neighbours in `V`.
pub fn build_f(g: &Graph, u: &VertexSet, w: &VertexSet, v: &VertexSet, d: f64) -> Result<Graph> {
    same_universe(g.n(), &[u, w, v])?;
    if !u.is_disjoint(w) || !u.is_disjoint(v) || !w.is_disjoint(v) {
        return Err(invalid("U, V, W must be pairwise disjoint"));
    }
    Ok(pairs_with_common(g, u, w, v, d * d * v.len() as f64 / 2.0))
}

/// The edges of `f` whose ends have at least `d²|X|/2` common neighbours in `X`.
pub fn good_for_x(g: &Graph, f: &Graph, x: &VertexSet, d: f64) -> Result<Graph> {
    same_universe(g.n(), &[x])?;
    if f.n() != g.n() {
        return Err(invalid("F and host differ in vertex count"));
    }
    let need = d * d * x.len() as f64 / 2.0;
    let mut b = GraphBuilder::new(g.n());
    for (a, c) in f.edges() {
        if g.common_in(a, c, x) as f64 + TOL >= need {
            b.add(a, c);
        }
    }
    Ok(b.build())
}

fn pairs_with_common(g: &Graph, u: &VertexSet, w: &VertexSet, v: &VertexSet, need: f64) -> Graph {
    let mut b = GraphBuilder::new(g.n());
    for x in u.iter() {
        let nx = g.neighbors_in(x, v);
        for y in w.iter() {
            if g.deg_in(y, &nx) as f64 + TOL >= need {
                b.add(x, y);
            }
        }
    }
    b.build()
}

/// Reveals each edge of `f` with probability `reveal_p`, then runs the
/// uniform random greedy matching on what was revealed.
pub fn random_greedy_matching(f: &Graph, reveal_p: f64, target: usize, seed: Seed) -> Result<Matching> {
    let revealed = edge_subsample(f, reveal_p, seed.derive_str("reveal"))?;
    Ok(random_greedy_matching_on(&revealed, target, seed.derive_str("greedy")))
}

/// Uniform random greedy matching: each step picks a uniformly random edge
/// among those disjoint from the edges already chosen. Stops at `target`
/// edges or when none remains. Edges are kept in selection order.
pub fn random_greedy_matching_on(f: &Graph, target: usize, seed: Seed) -> Matching {
    let mut edges: Vec<(usize, usize)> = f.edges().collect();
    // Scanning a uniform shuffle and keeping every edge that still fits is
    // the same process as repeatedly drawing a uniform available edge.
    edges.shuffle(&mut seed.rng());
    let mut used = VertexSet::new(f.n());
    let mut out = Matching::default();
    for (a, b) in edges {
        if out.len() >= target {
            break;
        }
        if !used.contains(a) && !used.contains(b) {
            used.insert(a);
            used.insert(b);
            out.edges.push((a, b));
        }
    }
    out
}

/// `H(M, V)`: vertex `i < |M|` stands for the `i`-th matching edge and vertex
/// `|M| + j` for the `j`-th vertex of `V`; `i ~ |M| + j` iff both ends of the
/// matching edge are adjacent to that vertex.
#[derive(Clone, Debug)]
pub struct AuxH {
    pub graph: Graph,
    pub left: VertexSet,
    pub right: VertexSet,
    pub matching: Vec<(usize, usize)>,
    pub centers: Vec<usize>,
}

impl AuxH {
    /// Turns a matching of `graph` into triangles of the host.
    pub fn triangles(&self, hm: &Matching) -> TrianglePacking {
        let k = self.matching.len();
        let mut out = TrianglePacking::new();
        for &(x, y) in &hm.edges {
            let (i, j) = if x < k { (x, y - k) } else { (y, x - k) };
            let (a, b) = self.matching[i];
            out.push(a, b, self.centers[j]);
        }
        out
    }
}

pub fn build_h(g: &Graph, m: &Matching, v: &VertexSet) -> Result<AuxH> {
    same_universe(g.n(), &[v])?;
    let covered = m.vertices(g.n());
    if covered.len() != 2 * m.len() {
        return Err(invalid("matching is not vertex-disjoint"));
    }
    if !covered.is_disjoint(v) {
        return Err(invalid("matching meets V"));
    }
    let k = m.len();
    let centers = v.to_vec();
    let mut b = GraphBuilder::new(k + centers.len());
    for (i, &(x, y)) in m.edges.iter().enumerate() {
        let common = g.neighbors_in(x, v).intersection(&g.neighbor_set(y));
        for c in common.iter() {
            let j = centers.binary_search(&c).expect("c in V");
            b.add(i, k + j);
        }
    }
    let total = k + centers.len();
    Ok(AuxH {
        graph: b.build(),
        left: VertexSet::range(total, 0..k),
        right: VertexSet::range(total, k..total),
        matching: m.edges.clone(),
        centers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::complete_multipartite;
    use crate::oracle::max_bipartite_matching;

    fn parts() -> (Graph, VertexSet, VertexSet, VertexSet) {
        let g = complete_multipartite(&[4, 4, 4]);
        (g, VertexSet::range(12, 0..4), VertexSet::range(12, 4..8), VertexSet::range(12, 8..12))
    }

    #[test]
    fn complete_tripartite_gives_complete_aux_graphs() {
        let (g, u, v, w) = parts();
        let f = build_f(&g, &u, &w, &v, 0.5).unwrap();
        assert_eq!(f.edge_count(), 16);
        let x = VertexSet::range(12, 4..6);
        assert_eq!(good_for_x(&g, &f, &x, 0.5).unwrap(), f);
        assert_eq!(good_for_x(&g, &f, &VertexSet::new(12), 0.9).unwrap(), f);
        let m = random_greedy_matching(&f, 1.0, 4, Seed(7)).unwrap();
        assert_eq!(m.len(), 4);
        let h = build_h(&g, &m, &v).unwrap();
        assert_eq!(h.graph.edge_count(), 16);
        let hm = max_bipartite_matching(&h.graph, &h.left, &h.right).unwrap();
        let t = h.triangles(&hm);
        assert_eq!(t.len(), 4);
        t.validate(&g).unwrap();
    }

    #[test]
    fn no_centre_edges_means_empty_f_and_h() {
        let g = Graph::from_edges(12, &[(0, 8), (1, 9)]).unwrap();
        let (_, u, v, w) = parts();
        assert_eq!(build_f(&g, &u, &w, &v, 0.5).unwrap().edge_count(), 0);
        let m = Matching { edges: vec![(0, 8)] };
        assert_eq!(build_h(&g, &m, &v).unwrap().graph.edge_count(), 0);
    }

    #[test]
    fn zero_reveal_gives_empty_matching() {
        let (g, u, v, w) = parts();
        let f = build_f(&g, &u, &w, &v, 0.5).unwrap();
        assert!(random_greedy_matching(&f, 0.0, 4, Seed(1)).unwrap().is_empty());
    }

    #[test]
    fn overlapping_sides_rejected() {
        let (g, u, v, _) = parts();
        assert!(build_f(&g, &u, &u, &v, 0.5).is_err());
    }
}
