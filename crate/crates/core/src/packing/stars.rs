//! Vertex-disjoint stars and their completion to triangles.

use serde::{Deserialize, Serialize};

use super::{Diagnostics, PackOutcome};
use crate::error::{invalid, Error, Result};
use crate::generators::{ceil_tol, floor_tol};
use crate::graph::{Graph, VertexSet};
use crate::oracle::TrianglePacking;
use crate::overlay::Overlay;
use crate::rng::Seed;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Star {
    pub center: usize,
    /// Ascending.
    pub leaves: Vec<usize>,
}

/// Disjoint stars with declared leaf-count bounds `min_leaves ≤ g_K ≤ max_leaves`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarFamily {
    pub n: usize,
    pub stars: Vec<Star>,
    /// `εm`; also the base of the dyadic buckets.
    pub min_leaves: f64,
    /// `⌊ε√n⌋`.
    pub max_leaves: usize,
}

impl StarFamily {
    pub fn sum_squares(&self) -> usize {
        self.stars.iter().map(|s| s.leaves.len().pow(2)).sum()
    }

    pub fn covered(&self) -> VertexSet {
        let mut s = VertexSet::new(self.n);
        for k in &self.stars {
            s.insert(k.center);
            for &l in &k.leaves {
                s.insert(l);
            }
        }
        s
    }

    /// Disjointness, adjacency to centres and the declared size bounds.
    pub fn validate(&self, host: &Graph) -> Result<()> {
        if host.n() != self.n {
            return Err(invalid("star family and host graph differ in vertex count"));
        }
        let lo = ceil_tol(self.min_leaves);
        let mut seen = VertexSet::new(self.n);
        for k in &self.stars {
            let g = k.leaves.len();
            if g < lo || g > self.max_leaves {
                return Err(Error::InvalidArgument(format!(
                    "star at {} has {g} leaves outside [{lo}, {}]",
                    k.center, self.max_leaves
                )));
            }
            for &v in std::iter::once(&k.center).chain(&k.leaves) {
                if v >= self.n || seen.contains(v) {
                    return Err(invalid(format!("vertex {v} repeated or out of range in star family")));
                }
                seen.insert(v);
            }
            if let Some(&l) = k.leaves.iter().find(|&&l| !host.has_edge(k.center, l)) {
                return Err(invalid(format!("leaf {l} not adjacent to centre {}", k.center)));
            }
        }
        Ok(())
    }
}

/// Locally optimal star family of `g` maximising `Σ g_K²`.
///
/// `s` only affects the argument checks: the caller's `ε` should not exceed
/// `1/(6s)`; larger values are accepted since the search is well-defined.
pub fn find_star_family(g: &Graph, m: usize, eps: f64, s: usize) -> Result<StarFamily> {
    if s == 0 {
        return Err(invalid("s must be positive"));
    }
    find_star_family_within(g, &VertexSet::full(g.n()), m, eps)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Free,
    Center(usize),
    Leaf(usize),
}

/// [`find_star_family`] on `g[active]`, with `n = |active|`.
///
/// Moves, tried in this order over lowest-index candidates, until none
/// applies:
/// 1. an uncovered vertex with at least `⌈εm⌉` uncovered neighbours becomes
///    the centre of a star on up to `⌊ε√n⌋` of them;
/// 2. a star below `⌊ε√n⌋` leaves whose centre sees an uncovered vertex
///    takes it as a leaf;
/// 3. a leaf with enough uncovered neighbours becomes a new centre; its old
///    star keeps its other leaves when that leaves at least `⌈εm⌉`, and is
///    dissolved otherwise. Applied only if `Σ g_K²` grows.
pub fn find_star_family_within(g: &Graph, active: &VertexSet, m: usize, eps: f64) -> Result<StarFamily> {
    crate::error::same_universe(g.n(), &[active])?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("eps = {eps} must lie in (0, 1)")));
    }
    let nn = active.len();
    let min_leaves = eps * m as f64;
    if min_leaves + 1e-9 < 2.0 {
        return Err(invalid(format!("eps·m = {min_leaves:.3} must be at least 2")));
    }
    let delta = g.min_degree_within(active);
    if delta < m {
        return Err(invalid(format!("minimum degree {delta} is below m = {m}")));
    }
    let lo = ceil_tol(min_leaves);
    let cap = floor_tol(eps * (nn as f64).sqrt());
    if lo > cap {
        return Err(invalid(format!("no admissible star size: ⌈εm⌉ = {lo} exceeds ⌊ε√n⌋ = {cap}")));
    }

    let n = g.n();
    let mut role = vec![Role::Free; n];
    let mut free = active.clone();
    let mut stars: Vec<Option<Star>> = Vec::new();
    let mut sum_sq = 0usize;

    let new_star = |stars: &mut Vec<Option<Star>>, role: &mut [Role], free: &mut VertexSet, c: usize, leaves: Vec<usize>| {
        let id = stars.len();
        role[c] = Role::Center(id);
        free.remove(c);
        for &l in &leaves {
            role[l] = Role::Leaf(id);
            free.remove(l);
        }
        stars.push(Some(Star { center: c, leaves }));
    };

    loop {
        let before = sum_sq;
        // (i)
        let grow = free.iter().find_map(|v| {
            let nb = g.neighbors_in(v, &free);
            (nb.len() >= lo).then(|| (v, nb.iter().take(cap).collect::<Vec<_>>()))
        });
        if let Some((v, leaves)) = grow {
            sum_sq += leaves.len().pow(2);
            new_star(&mut stars, &mut role, &mut free, v, leaves);
            assert!(sum_sq > before);
            continue;
        }
        // (ii)
        let mut order: Vec<usize> = (0..stars.len()).filter(|&i| stars[i].is_some()).collect();
        order.sort_by_key(|&i| stars[i].as_ref().map(|s| s.center));
        let extend = order.into_iter().find_map(|i| {
            let k = stars[i].as_ref()?;
            if k.leaves.len() >= cap {
                return None;
            }
            g.neighbors_in(k.center, &free).first().map(|x| (i, x))
        });
        if let Some((i, x)) = extend {
            let k = stars[i].as_mut().expect("live star");
            let gk = k.leaves.len();
            let pos = k.leaves.partition_point(|&l| l < x);
            k.leaves.insert(pos, x);
            role[x] = Role::Leaf(i);
            free.remove(x);
            sum_sq = sum_sq - gk * gk + (gk + 1) * (gk + 1);
            assert!(sum_sq > before);
            continue;
        }
        // (iii)
        let recentre = (0..n).find_map(|v| {
            let Role::Leaf(i) = role[v] else { return None };
            let gk = stars[i].as_ref()?.leaves.len();
            let nb = g.neighbors_in(v, &free);
            let k = nb.len().min(cap);
            if k < lo {
                return None;
            }
            let keep = gk > lo;
            let gain = k * k + if keep { (gk - 1) * (gk - 1) } else { 0 };
            (gain > gk * gk).then(|| (v, i, keep, nb.iter().take(k).collect::<Vec<_>>()))
        });
        if let Some((v, i, keep, leaves)) = recentre {
            let old = stars[i].take().expect("live star");
            sum_sq -= old.leaves.len().pow(2);
            if keep {
                let rest: Vec<usize> = old.leaves.iter().copied().filter(|&l| l != v).collect();
                sum_sq += rest.len().pow(2);
                stars[i] = Some(Star { center: old.center, leaves: rest });
            } else {
                for &u in std::iter::once(&old.center).chain(&old.leaves) {
                    role[u] = Role::Free;
                    free.insert(u);
                }
            }
            role[v] = Role::Free;
            free.insert(v);
            sum_sq += leaves.len().pow(2);
            new_star(&mut stars, &mut role, &mut free, v, leaves);
            assert!(sum_sq > before);
            continue;
        }
        break;
    }

    let mut stars: Vec<Star> = stars.into_iter().flatten().collect();
    stars.sort_by_key(|s| s.center);
    let fam = StarFamily { n, stars, min_leaves, max_leaves: cap };
    debug_assert_eq!(fam.sum_squares(), sum_sq);
    Ok(fam)
}

/// Dyadic bucket of a star with `g` leaves: the `i ≥ 1` with
/// `2^{i−1}·g_min ≤ g < 2^i·g_min`, and the truncated size `⌈2^{i−1}·g_min⌉`.
pub(crate) fn bucket(g: usize, g_min: f64) -> (u32, usize) {
    let mut i = 1u32;
    while (2f64.powi(i as i32) * g_min) <= g as f64 + 1e-9 {
        i += 1;
    }
    let size = ceil_tol(2f64.powi(i as i32 - 1) * g_min).min(g);
    (i, size)
}

/// Completes each star to a triangle when its truncated leaf set receives an
/// edge of `G(n, p)`.
pub fn stars_to_triangles(g: &Graph, stars: &StarFamily, p: f64, seed: Seed) -> Result<PackOutcome> {
    stars.validate(g)?;
    let overlay = Overlay::new(g.n(), p, seed)?;
    let mut diagnostics = Diagnostics::default();
    diagnostics.round("stars", &overlay);
    let packing = complete_stars(stars, &overlay, &mut diagnostics);
    let out = PackOutcome { packing, overlay, diagnostics };
    out.validate(g)?;
    Ok(out)
}

pub(crate) fn complete_stars(stars: &StarFamily, ov: &Overlay, diag: &mut Diagnostics) -> TrianglePacking {
    let mut packing = TrianglePacking::new();
    let mut buckets: Vec<(usize, usize)> = Vec::new();
    for k in &stars.stars {
        let (i, size) = bucket(k.leaves.len(), stars.min_leaves);
        let i = i as usize;
        if buckets.len() < i {
            buckets.resize(i, (0, 0));
        }
        buckets[i - 1].0 += 1;
        let leaves = &k.leaves[..size];
        let hit = leaves
            .iter()
            .enumerate()
            .find_map(|(j, &x)| leaves[j + 1..].iter().find(|&&y| ov.has_edge(x, y)).map(|&y| (x, y)));
        if let Some((x, y)) = hit {
            packing.push(k.center, x, y);
            buckets[i - 1].1 += 1;
        }
    }
    for (i, (total, done)) in buckets.iter().enumerate() {
        if *total > 0 {
            diag.note(format!("bucket {}: {done}/{total} stars completed", i + 1));
        }
    }
    packing
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disjoint_stars(count: usize, k: usize) -> Graph {
        let n = count * (k + 1);
        let mut e = Vec::new();
        for c in 0..count {
            let base = c * (k + 1);
            for l in 1..=k {
                e.push((base, base + l));
            }
        }
        Graph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn buckets_are_dyadic() {
        assert_eq!(bucket(20, 20.0), (1, 20));
        assert_eq!(bucket(39, 20.0), (1, 20));
        assert_eq!(bucket(40, 20.0), (2, 40));
        assert_eq!(bucket(7, 2.5), (2, 5));
    }

    #[test]
    fn leaves_of_degree_one_violate_the_degree_condition() {
        // Leaves have degree 1 while eps·m ≥ 2 forces m ≥ 3.
        let g = disjoint_stars(20, 3);
        assert!(find_star_family(&g, 3, 0.7, 1).is_err());
    }

    #[test]
    fn edgeless_graph_gives_argument_error() {
        assert!(find_star_family(&Graph::empty(100), 2, 0.5, 1).is_err());
    }

    #[test]
    fn stars_complete_at_p_one_and_not_at_zero() {
        let g = disjoint_stars(5, 4);
        let fam = StarFamily {
            n: g.n(),
            stars: (0..5).map(|c| Star { center: c * 5, leaves: (c * 5 + 1..c * 5 + 5).collect() }).collect(),
            min_leaves: 4.0,
            max_leaves: 4,
        };
        assert_eq!(stars_to_triangles(&g, &fam, 1.0, Seed(1)).unwrap().len(), 5);
        assert_eq!(stars_to_triangles(&g, &fam, 0.0, Seed(1)).unwrap().len(), 0);
    }
}
