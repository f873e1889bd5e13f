//! Triangles in `t` rounds of `s` across a maximum cut.

use super::{max_cut_within, Diagnostics, PackOutcome};
use crate::error::Result;
use crate::graph::{Graph, VertexSet};
use crate::oracle::TrianglePacking;
use crate::overlay::Overlay;
use crate::rng::Seed;

/// Round greedy on all of `g` with a fresh overlay `G(n, p)`.
pub fn round_greedy_triangles(g: &Graph, m: usize, p: f64, seed: Seed) -> Result<PackOutcome> {
    let overlay = Overlay::new(g.n(), p, seed)?;
    let mut diagnostics = Diagnostics::default();
    let packing = round_greedy_within(g, &VertexSet::full(g.n()), m, &overlay, &mut diagnostics);
    let out = PackOutcome { packing, overlay, diagnostics };
    out.validate(g)?;
    Ok(out)
}

/// Round greedy on `g[active]`, revealing `ov` in `t` rounds.
///
/// With `(A, B)` a maximum cut and `|A| ≤ |B|`, each round picks up to
/// `s = ⌈2n/m⌉` vertices `v ∈ A` in index order that still have at least
/// `⌈m/16⌉` unreserved neighbours in `B` and whose unreserved neighbourhood
/// received a round edge `xy`; `(v, x, y)` is taken and `x, y` are reserved.
/// A vertex whose neighbourhood got no edge is skipped for the rest of the
/// round.
pub(crate) fn round_greedy_within(
    g: &Graph,
    active: &VertexSet,
    m: usize,
    ov: &Overlay,
    diag: &mut Diagnostics,
) -> TrianglePacking {
    let n = g.n();
    let nn = active.len();
    let mut out = TrianglePacking::new();
    if m == 0 || nn < 9 {
        diag.note("round greedy: degenerate input");
        return out;
    }
    let (x, y) = max_cut_within(g, active);
    let (a, b) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    let s = (2 * nn).div_ceil(m);
    let t = (m * m).div_ceil(2 * nn).max(1);
    let block = m.div_ceil(16).max(2);
    if m * m < nn || 32 * m > nn {
        diag.note(format!("round greedy: m = {m} outside [√n, n/32] for n = {nn}"));
    }
    let max_deg = active.iter().map(|v| g.deg_in(v, active)).max().unwrap_or(0);
    if 32 * max_deg >= nn {
        diag.note(format!("round greedy: Δ = {max_deg} is not below n/32"));
    }
    diag.note(format!("round greedy: |A| = {}, |B| = {}, s = {s}, t = {t}, block = {block}", a.len(), b.len()));

    let mut a_used = VertexSet::new(n);
    let mut b_used = VertexSet::new(n);
    for (i, round) in ov.split(t).iter().enumerate() {
        diag.round(format!("round {}", i + 1), round);
        let rg = round.graph_within(&b);
        let mut skipped = VertexSet::new(n);
        let mut picked = 0;
        while picked < s {
            let free_b = b.difference(&b_used);
            let mut found = None;
            let mut qualifying = false;
            for v in a.iter() {
                if a_used.contains(v) || skipped.contains(v) {
                    continue;
                }
                let cand = g.neighbors_in(v, &free_b);
                if cand.len() < block {
                    continue;
                }
                qualifying = true;
                let hit = cand.iter().find_map(|x| {
                    let mut c = rg.neighbors_in(x, &cand);
                    c.intersect_with(&cand);
                    c.iter().find(|&y| y > x).map(|y| (x, y))
                });
                match hit {
                    Some((x, y)) => {
                        found = Some((v, x, y));
                        break;
                    }
                    None => skipped.insert(v),
                }
            }
            let Some((v, x, y)) = found else {
                if !qualifying {
                    diag.note(format!("round {}: no vertex of A with {block} free B-neighbours", i + 1));
                }
                break;
            };
            out.push(v, x, y);
            a_used.insert(v);
            b_used.insert(x);
            b_used.insert(y);
            picked += 1;
        }
        if picked < s {
            diag.note(format!("round {}: selected {picked} of {s}", i + 1));
        }
        debug_assert_eq!(b_used.len(), 2 * a_used.len());
    }
    out
}
