//! Packing near the extremal graph: `g` has an (α, β)-stable partition.
//!
//! Sizes are handled in thirds so that every quantity is an integer:
//! `M0 = max(n − 3δ, n − 3⌊αn⌋)`, `K3 = n − 3⌈αn⌉` and `w = max(K3, 0)`.

use super::cherry::{balanced, Cherry, CherryParams};
use super::sublinear::{sublinear_within, SublinearParams};
use super::{cover_with, Diagnostics, PackOutcome};
use crate::error::{invalid, same_universe, Result};
use crate::generators::{ceil_tol, floor_tol};
use crate::graph::{Graph, VertexSet};
use crate::oracle::TrianglePacking;
use crate::overlay::Overlay;
use crate::rng::Seed;
use crate::stability::verify_stability;

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalParams {
    pub cherry: CherryParams,
    pub sublinear: SublinearParams,
}

impl Default for ExtremalParams {
    fn default() -> Self {
        Self { cherry: CherryParams { d: 0.5, ..CherryParams::default() }, sublinear: SublinearParams::default() }
    }
}

pub fn extremal_pack(g: &Graph, a: &VertexSet, b: &VertexSet, alpha: f64, beta: f64, p: f64, seed: Seed) -> Result<PackOutcome> {
    extremal_pack_with(g, a, b, alpha, beta, p, seed, &ExtremalParams::default())
}

/// Lowest `k` vertices of `s` by `key`, ties by index.
fn lowest_by(s: &VertexSet, k: usize, key: impl Fn(usize) -> usize) -> Vec<usize> {
    let mut v = s.to_vec();
    v.sort_by_key(|&x| (key(x), x));
    v.truncate(k);
    v
}

#[allow(clippy::too_many_arguments)]
pub fn extremal_pack_with(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    alpha: f64,
    beta: f64,
    p: f64,
    seed: Seed,
    params: &ExtremalParams,
) -> Result<PackOutcome> {
    let n = g.n();
    same_universe(n, &[a, b])?;
    let overlay = Overlay::new(n, p, seed)?;
    if n < 9 {
        return Ok(PackOutcome::empty(n, overlay, "extremal: fewer than 9 vertices"));
    }
    let report = verify_stability(g, a, b, alpha, beta)?;
    if !report.holds {
        return Err(invalid(format!("partition is not ({alpha}, {beta})-stable: {report}")));
    }
    let mut diag = Diagnostics::default();
    let nf = n as f64;
    let ca = ceil_tol(alpha * nf);
    let fb = n - ca;
    let delta = g.min_degree() as i64;
    let m0 = (n as i64 - 3 * delta).max(n as i64 - 3 * floor_tol(alpha * nf) as i64);
    let k3 = n as i64 - 3 * ca as i64;
    let w = k3.max(0) as usize;
    let target = (g.min_degree()).min(floor_tol(alpha * nf));
    diag.note(format!("extremal: target {target}, 3m0 = {m0}, 3κ = {k3}, w = {w}"));

    let excess_b = b.len().saturating_sub(fb);
    let excess_a = a.len().saturating_sub(ca);
    let t1 = if excess_b > 0 && 3 * excess_b as i64 > m0 - k3 { ((3 * excess_b as i64 - m0 + k3) / 3) as usize } else { 0 };
    let thr = 7.0 * beta * nf;
    let low = |v: usize, other: &VertexSet| g.deg_in(v, other) as f64 <= other.len() as f64 - thr;
    let need_g2 = excess_a > 0 || a.iter().any(|v| low(v, b)) || b.iter().any(|v| low(v, a));
    let count = 1 + usize::from(t1 > 0) + usize::from(need_g2);
    let mut rounds = overlay.split(count).into_iter();
    let g1 = if t1 > 0 { rounds.next() } else { None };
    let g2 = if need_g2 { rounds.next() } else { None };
    let g3 = rounds.next().expect("cherry round");
    let edge2 = |x: usize, y: usize| g.has_edge(x, y) || g2.as_ref().is_some_and(|r| r.has_edge(x, y));

    let mut packing = TrianglePacking::new();
    let mut removed = VertexSet::new(n);

    // Stage 1: reach |B1| = 2|A1| + w.
    if let Some(g1) = &g1 {
        diag.round("G1", g1);
        let mut sd = Diagnostics::default();
        let mut t = sublinear_within(g, b, t1, g1, &params.sublinear, &mut sd);
        diag.absorb("stage 1", sd);
        if t.len() < t1 {
            diag.note(format!("stage 1: {} of {t1} triangles inside B", t.len()));
        }
        t.truncate(t1);
        removed.union_with(&t.vertices(n));
        packing.extend(&t);
    }
    if let Some(g2) = &g2 {
        diag.round("G2", g2);
    }
    if excess_a > 0 {
        let mut found = 0;
        let mut a_free = a.clone();
        for v in b.iter() {
            if found == excess_a {
                break;
            }
            if removed.contains(v) {
                continue;
            }
            let cand = g.neighbors_in(v, &a_free);
            if let Some((x, y)) = super::find_edge(&cand, edge2) {
                packing.push(v, x, y);
                for u in [v, x, y] {
                    removed.insert(u);
                }
                a_free.remove(x);
                a_free.remove(y);
                found += 1;
            }
        }
        if found < excess_a {
            diag.note(format!("stage 1: {found} of {excess_a} (2A, 1B) triangles"));
        }
    }
    let mut parked = park(g, a, b, &removed, w, &mut diag);

    // Stage 2: vertices with low degree to the other side.
    let a1 = a.difference(&removed).difference(&parked);
    let b1 = b.difference(&removed).difference(&parked);
    let at = VertexSet::from_vertices(n, a1.iter().filter(|&v| low(v, &b1)))?;
    let bt = VertexSet::from_vertices(n, b1.iter().filter(|&v| low(v, &a1)))?;
    if !at.is_empty() || !bt.is_empty() {
        diag.note(format!("stage 2: |Ã1| = {}, |B̃1| = {}", at.len(), bt.len()));
    }
    let mut pool = b1.difference(&bt);
    let c = cover_with(g, at.iter(), &mut pool, usize::MAX, edge2);
    removed.union_with(&c.packing.vertices(n));
    packing.extend(&c.packing);
    let mut stray = c.uncovered;
    let mut a_pool = a1.difference(&at);
    for v in bt.iter() {
        let xs = g.neighbors_in(v, &a_pool);
        let ys = g.neighbors_in(v, &pool);
        let hit = xs.iter().find_map(|x| ys.iter().find(|&y| edge2(x, y)).map(|y| (x, y)));
        match hit {
            Some((x, y)) => {
                packing.push(v, x, y);
                a_pool.remove(x);
                pool.remove(y);
                for u in [v, x, y] {
                    removed.insert(u);
                }
            }
            None => stray.insert(v),
        }
    }
    if !stray.is_empty() {
        diag.note(format!("stage 2: {} vertices left uncovered and parked", stray.len()));
        parked.union_with(&stray);
        parked.union_with(&park(g, a, b, &removed.union(&parked), w, &mut diag));
    }

    // Stage 3: balanced cherry on (B2', A2, B2'').
    let a2 = a.difference(&removed).difference(&parked);
    let mut b2 = b.difference(&removed).difference(&parked);
    debug_assert_eq!(b2.len(), 2 * a2.len() + w);
    for v in lowest_by(&b2, w, |v| g.deg_in(v, &a2)) {
        b2.remove(v);
    }
    let (mut u, mut ww) = (VertexSet::new(n), VertexSet::new(n));
    for (i, v) in b2.iter().enumerate() {
        if i % 2 == 0 {
            u.insert(v);
        } else {
            ww.insert(v);
        }
    }
    diag.note(format!("stage 3: cherry with |V| = {}, |U| = {}, |W| = {}", a2.len(), u.len(), ww.len()));
    diag.round("G3", &g3);
    if !a2.is_empty() && u.len() == ww.len() {
        let cherry = Cherry::new(u, a2, ww)?;
        let rounds = g3.split(2);
        let mut sd = Diagnostics::default();
        let t = balanced(g, &cherry, &params.cherry, &rounds[0], &rounds[1], seed.derive_str("cherry"), &mut sd)?;
        diag.absorb("stage 3", sd);
        packing.extend(&t);
    }
    if packing.len() < target {
        diag.note(format!("extremal: {} of {target} triangles", packing.len()));
    }
    let out = PackOutcome { packing, overlay, diagnostics: diag };
    out.validate(g)?;
    Ok(out)
}

/// Parks vertices so that the unparked, unremoved sides satisfy
/// `|B1| = 2|A1| + w`, preferring the lowest cut degree.
fn park(g: &Graph, a: &VertexSet, b: &VertexSet, removed: &VertexSet, w: usize, diag: &mut Diagnostics) -> VertexSet {
    let n = g.n();
    let a1 = a.difference(removed);
    let b1 = b.difference(removed);
    let d = b1.len() as i64 - 2 * a1.len() as i64 - w as i64;
    let mut parked = VertexSet::new(n);
    let (x, y) = if d >= 0 { (0, d as usize) } else { let x = (-d + 1) / 2; (x as usize, (2 * x + d) as usize) };
    for v in lowest_by(&a1, x, |v| g.deg_in(v, &b1)) {
        parked.insert(v);
    }
    let a_rest = a1.difference(&parked);
    let mut order = b1.to_vec();
    order.sort_by_key(|&v| (g.deg_in(v, &a_rest), v));
    for v in order.into_iter().take(y) {
        parked.insert(v);
    }
    if !parked.is_empty() {
        diag.note(format!("parked {} from A and {} from B", x, y));
    }
    parked
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::complete_bipartite;

    #[test]
    fn extremal_graph_with_all_edges_revealed() {
        let g = complete_bipartite(30, 90).unwrap();
        let a = VertexSet::range(90, 0..30);
        let out = extremal_pack(&g, &a, &a.complement(), 1.0 / 3.0, 0.05, 1.0, Seed(2)).unwrap();
        assert_eq!(out.len(), 30);
    }

    #[test]
    fn unstable_partition_is_rejected() {
        let g = complete_bipartite(30, 90).unwrap();
        let a = VertexSet::range(90, 0..45);
        assert!(extremal_pack(&g, &a, &a.complement(), 1.0 / 3.0, 0.05, 1.0, Seed(2)).is_err());
    }

    #[test]
    fn no_overlay_no_triangles_in_bipartite_host() {
        let g = complete_bipartite(30, 90).unwrap();
        let a = VertexSet::range(90, 0..30);
        assert!(extremal_pack(&g, &a, &a.complement(), 1.0 / 3.0, 0.05, 0.0, Seed(2)).unwrap().is_empty());
    }
}
