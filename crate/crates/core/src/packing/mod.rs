//! Constructive triangle packing in `G ∪ G(n, p)`.
//!
//! Every pipeline takes the caller's `p` and a [`Seed`], builds one master
//! [`Overlay`] from them, and reveals it in rounds via [`Overlay::split`].
//! The returned [`PackOutcome`] carries that master so the packing can be
//! validated against `g ∪ overlay`.

mod aux;
mod cherry;
mod extremal;
mod pair;
mod perturbed;
mod round_greedy;
mod stars;
mod sublinear;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{and_count, Graph, GraphBuilder, VertexSet};
use crate::oracle::TrianglePacking;
use crate::overlay::Overlay;

pub use aux::{build_h, build_f, good_for_x, random_greedy_matching, random_greedy_matching_on, AuxH};
pub use cherry::{balance_cherry, balance_count, cherry_factor, Cherry, CherryMode, CherryParams};
pub use extremal::{extremal_pack, extremal_pack_with, ExtremalParams};
pub use pair::{pair_factor, solve_split};
pub use perturbed::{perturbed_pack, perturbed_pack_with, PerturbedParams};
pub use round_greedy::round_greedy_triangles;
pub use stars::{find_star_family, find_star_family_within, stars_to_triangles, Star, StarFamily};
pub use sublinear::{sublinear_pack, sublinear_pack_with, SublinearParams};

/// One revealed round: its name and marginal edge probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundInfo {
    pub name: String,
    pub p: f64,
}

/// Rounds revealed and free-form notes on partial results.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub rounds: Vec<RoundInfo>,
    pub notes: Vec<String>,
}

impl Diagnostics {
    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn round(&mut self, name: impl Into<String>, ov: &Overlay) {
        self.rounds.push(RoundInfo { name: name.into(), p: ov.p() });
    }

    pub(crate) fn absorb(&mut self, prefix: &str, other: Diagnostics) {
        for r in other.rounds {
            self.rounds.push(RoundInfo { name: format!("{prefix}/{}", r.name), ..r });
        }
        for n in other.notes {
            self.notes.push(format!("{prefix}: {n}"));
        }
    }
}

/// A packing together with the random graph it may use.
#[derive(Clone, Debug)]
pub struct PackOutcome {
    pub packing: TrianglePacking,
    pub overlay: Overlay,
    pub diagnostics: Diagnostics,
}

impl PackOutcome {
    pub(crate) fn empty(n: usize, overlay: Overlay, why: &str) -> Self {
        let mut diagnostics = Diagnostics::default();
        diagnostics.note(why);
        debug_assert_eq!(overlay.n(), n);
        Self { packing: TrianglePacking::new(), overlay, diagnostics }
    }

    pub fn len(&self) -> usize {
        self.packing.len()
    }

    pub fn is_empty(&self) -> bool {
        self.packing.is_empty()
    }

    /// Checks the packing against `g ∪ overlay`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        self.packing.validate_with(g.n(), |u, v| g.has_edge(u, v) || self.overlay.has_edge(u, v))
    }
}

/// Lowest `(x, y)` with `x < y` in `s` such that `edge(x, y)`.
pub(crate) fn find_edge(s: &VertexSet, edge: impl Fn(usize, usize) -> bool) -> Option<(usize, usize)> {
    let vs = s.to_vec();
    for (i, &x) in vs.iter().enumerate() {
        for &y in &vs[i + 1..] {
            if edge(x, y) {
                return Some((x, y));
            }
        }
    }
    None
}

/// Greedy cover result.
#[derive(Clone, Debug)]
pub struct Cover {
    pub packing: TrianglePacking,
    pub uncovered: VertexSet,
}

/// For each target in increasing order, finds the lowest overlay edge `xy`
/// inside `N_g(v) ∩ pool` avoiding earlier triangles and adds `(v, x, y)`.
pub fn greedy_cover(g: &Graph, targets: &VertexSet, pool: &VertexSet, overlay: &Graph) -> Result<Cover> {
    crate::error::same_universe(g.n(), &[targets, pool])?;
    if overlay.n() != g.n() {
        return Err(crate::error::invalid("overlay and graph have different vertex counts"));
    }
    if !targets.is_disjoint(pool) {
        return Err(crate::error::invalid("targets and pool must be disjoint"));
    }
    let mut avail = pool.clone();
    Ok(cover_with(g, targets.iter(), &mut avail, usize::MAX, |x, y| overlay.has_edge(x, y)))
}

/// Core of [`greedy_cover`]: consumes vertices of `avail`, stops after
/// `limit` triangles.
pub(crate) fn cover_with(
    g: &Graph,
    targets: impl IntoIterator<Item = usize>,
    avail: &mut VertexSet,
    limit: usize,
    edge: impl Fn(usize, usize) -> bool,
) -> Cover {
    let mut packing = TrianglePacking::new();
    let mut uncovered = VertexSet::new(g.n());
    for v in targets {
        if packing.len() >= limit {
            uncovered.insert(v);
            continue;
        }
        let cand = g.neighbors_in(v, avail);
        match find_edge(&cand, &edge) {
            Some((x, y)) => {
                packing.push(v, x, y);
                avail.remove(x);
                avail.remove(y);
                avail.remove(v);
            }
            None => uncovered.insert(v),
        }
    }
    Cover { packing, uncovered }
}

/// Greedy vertex-disjoint triangles of `h` inside `within`: repeatedly the
/// lexicographically least triangle among unused vertices.
pub fn greedy_triangle_packing(h: &Graph, within: &VertexSet, limit: usize) -> TrianglePacking {
    let mut avail = within.clone();
    let mut out = TrianglePacking::new();
    let vs = within.to_vec();
    for &u in &vs {
        if out.len() >= limit {
            break;
        }
        if !avail.contains(u) {
            continue;
        }
        let cand = h.neighbors_in(u, &avail);
        let hit = cand.iter().find_map(|x| {
            let mut c = h.neighbors_in(x, &cand);
            c.intersect_with(&cand);
            c.first().map(|y| (x, y))
        });
        if let Some((x, y)) = hit {
            out.push(u, x, y);
            for w in [u, x, y] {
                avail.remove(w);
            }
        }
    }
    out
}

/// Bipartition of all vertices with `2·cross(v) ≥ deg(v)` for every `v`.
pub fn max_cut_bipartition(g: &Graph) -> (VertexSet, VertexSet) {
    max_cut_within(g, &VertexSet::full(g.n()))
}

/// [`max_cut_bipartition`] of `g[active]`; both sides lie inside `active`.
///
/// Vertices are placed in breadth-first order, each on the side holding
/// fewer of its placed neighbours (ties to the first side), and then any
/// vertex with more neighbours on its own side than across is moved until
/// none remains. On a bipartite graph the start is already a proper
/// 2-colouring.
pub(crate) fn max_cut_within(g: &Graph, active: &VertexSet) -> (VertexSet, VertexSet) {
    let n = g.n();
    let mut a = VertexSet::new(n);
    let mut b = VertexSet::new(n);
    let mut placed = VertexSet::new(n);
    let mut queue = VecDeque::new();
    for root in active.iter() {
        if placed.contains(root) {
            continue;
        }
        placed.insert(root);
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            if g.deg_in(v, &a) <= g.deg_in(v, &b) {
                a.insert(v);
            } else {
                b.insert(v);
            }
            for w in g.neighbors_in(v, active).iter() {
                if !placed.contains(w) {
                    placed.insert(w);
                    queue.push_back(w);
                }
            }
        }
    }
    loop {
        let mut moved = false;
        for v in active.iter() {
            let in_a = a.contains(v);
            let (own, other) = if in_a { (&a, &b) } else { (&b, &a) };
            let same = and_count(g.row(v), own.words());
            let cross = and_count(g.row(v), other.words());
            if same > cross {
                if in_a {
                    a.remove(v);
                    b.insert(v);
                } else {
                    b.remove(v);
                    a.insert(v);
                }
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    (a, b)
}

/// `g ∪ overlay[s]`, materialised.
pub(crate) fn union_within(g: &Graph, ov: &Overlay, s: &VertexSet) -> Graph {
    let mut b = GraphBuilder::from_graph(g);
    let r = ov.graph_within(s);
    for (u, v) in r.edges() {
        b.add(u, v);
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::complete_bipartite;

    #[test]
    fn cover_star_with_overlay_edge() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        let ov = Graph::from_edges(3, &[(1, 2)]).unwrap();
        let t = VertexSet::from_vertices(3, [0]).unwrap();
        let pool = t.complement();
        let c = greedy_cover(&g, &t, &pool, &ov).unwrap();
        assert_eq!(c.packing.triples(), &[[0, 1, 2]]);
        assert!(c.uncovered.is_empty());
        let c = greedy_cover(&g, &t, &pool, &Graph::empty(3)).unwrap();
        assert!(c.packing.is_empty());
        assert_eq!(c.uncovered, t);
    }

    #[test]
    fn cover_rejects_overlapping_sets() {
        let g = Graph::complete(4);
        let s = VertexSet::full(4);
        assert!(greedy_cover(&g, &s, &s, &g).is_err());
    }

    #[test]
    fn max_cut_on_k4_and_bipartite() {
        let (a, b) = max_cut_bipartition(&Graph::complete(4));
        assert_eq!((a.len(), b.len()), (2, 2));
        let g = complete_bipartite(3, 8).unwrap();
        let (a, b) = max_cut_bipartition(&g);
        assert_eq!(a, VertexSet::range(8, 0..3));
        assert_eq!(b, VertexSet::range(8, 3..8));
    }

    #[test]
    fn greedy_packing_on_complete_graph() {
        let p = greedy_triangle_packing(&Graph::complete(10), &VertexSet::full(10), usize::MAX);
        assert_eq!(p.len(), 3);
        p.validate(&Graph::complete(10)).unwrap();
    }
}
