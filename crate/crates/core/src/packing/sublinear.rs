//! `m ≤ n/256` disjoint triangles, dispatched on the high-degree vertices.

use super::round_greedy::round_greedy_within;
use super::stars::{complete_stars, find_star_family_within};
use super::{cover_with, greedy_triangle_packing, Diagnostics, PackOutcome};
use crate::error::Result;
use crate::graph::{Graph, VertexSet};
use crate::oracle::TrianglePacking;
use crate::overlay::Overlay;
use crate::rng::Seed;

#[derive(Clone, Debug, PartialEq)]
pub struct SublinearParams {
    /// Vertices of degree at least `n / high_degree_divisor` are handled
    /// separately.
    pub high_degree_divisor: usize,
    /// Below this many triangles the overlay alone is harvested; `None`
    /// means `(ln n)³`.
    pub harvest_below: Option<f64>,
    /// Star parameter `ε`; `None` means `max(2/m', 1/48)`.
    pub star_eps: Option<f64>,
}

impl Default for SublinearParams {
    fn default() -> Self {
        Self { high_degree_divisor: 64, harvest_below: None, star_eps: None }
    }
}

pub fn sublinear_pack(g: &Graph, m: usize, p: f64, seed: Seed) -> Result<PackOutcome> {
    sublinear_pack_with(g, m, p, seed, &SublinearParams::default())
}

pub fn sublinear_pack_with(g: &Graph, m: usize, p: f64, seed: Seed, params: &SublinearParams) -> Result<PackOutcome> {
    let overlay = Overlay::new(g.n(), p, seed)?;
    let mut diagnostics = Diagnostics::default();
    let packing = sublinear_within(g, &VertexSet::full(g.n()), m, &overlay, params, &mut diagnostics);
    let out = PackOutcome { packing, overlay, diagnostics };
    out.validate(g)?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Route {
    Harvest,
    Stars,
    RoundGreedy,
}

/// Sublinear packing of `g[active]`, aiming for `m` triangles.
pub(crate) fn sublinear_within(
    g: &Graph,
    active: &VertexSet,
    m: usize,
    ov: &Overlay,
    params: &SublinearParams,
    diag: &mut Diagnostics,
) -> TrianglePacking {
    let n = g.n();
    let nn = active.len();
    if m == 0 || nn < 9 {
        diag.note("sublinear: degenerate input");
        return TrianglePacking::new();
    }
    if 256 * m > nn {
        diag.note(format!("sublinear: m = {m} above n/256 for n = {nn}"));
    }
    let threshold = nn as f64 / params.high_degree_divisor.max(1) as f64;
    let high = VertexSet::from_vertices(n, active.iter().filter(|&v| g.deg_in(v, active) as f64 >= threshold))
        .expect("subset of active");

    if high.len() >= m {
        diag.round("G1", ov);
        let mut order = high.to_vec();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.deg_in(v, active)), v));
        order.truncate(m);
        let targets = VertexSet::from_vertices(n, order.iter().copied()).expect("subset of active");
        let mut pool = active.difference(&targets);
        let c = cover_with(g, order, &mut pool, m, |x, y| ov.has_edge(x, y));
        if c.packing.len() < m {
            diag.note(format!("sublinear: covered {} of {m} high-degree vertices", c.packing.len()));
        }
        return c.packing;
    }

    let rest = active.difference(&high);
    let m1 = m - high.len();
    let ln = (nn as f64).ln();
    let harvest_below = params.harvest_below.unwrap_or(ln.powi(3));
    let route = if (m1 as f64) < harvest_below {
        Route::Harvest
    } else if (m1 * m1) as f64 <= rest.len() as f64 {
        Route::Stars
    } else {
        Route::RoundGreedy
    };
    diag.note(format!("sublinear: |V'| = {}, m' = {m1}, route {route:?}", high.len()));

    let rounds = if high.is_empty() { vec![ov.clone()] } else { ov.split(2) };
    let (g1, main) = if high.is_empty() { (None, &rounds[0]) } else { (Some(&rounds[0]), &rounds[1]) };
    diag.round(format!("{route:?}"), main);

    let harvest = |diag: &mut Diagnostics| {
        let h = main.graph_within(&rest);
        let t = greedy_triangle_packing(&h, &rest, m1);
        if t.len() < m1 {
            diag.note(format!("sublinear: harvested {} of {m1}", t.len()));
        }
        t
    };
    let mut packing = match route {
        Route::Harvest => harvest(diag),
        Route::Stars => {
            let eps = params.star_eps.unwrap_or((2.0 / m1 as f64).max(1.0 / 48.0));
            match find_star_family_within(g, &rest, m1, eps) {
                Ok(fam) => {
                    diag.note(format!("sublinear: {} stars, Σg² = {}", fam.stars.len(), fam.sum_squares()));
                    complete_stars(&fam, main, diag)
                }
                Err(e) => {
                    diag.note(format!("sublinear: star family unavailable ({e}); harvesting instead"));
                    harvest(diag)
                }
            }
        }
        Route::RoundGreedy => round_greedy_within(g, &rest, m1, main, diag),
    };

    if let Some(g1) = g1 {
        diag.round("G1", g1);
        if packing.len() < m {
            let mut pool = rest.difference(&packing.vertices(n));
            let need = m - packing.len();
            let c = cover_with(g, high.iter(), &mut pool, need, |x, y| g1.has_edge(x, y));
            if c.packing.len() < need {
                diag.note(format!("sublinear: top-up covered {} of {need}", c.packing.len()));
            }
            packing.extend(&c.packing);
        }
    }
    packing
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::complete_bipartite;

    #[test]
    fn single_high_degree_vertex_at_p_one() {
        let g = complete_bipartite(1, 40).unwrap();
        let out = sublinear_pack(&g, 1, 1.0, Seed(0)).unwrap();
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn bipartite_without_overlay_is_empty() {
        let g = complete_bipartite(5, 600).unwrap();
        assert!(sublinear_pack(&g, 2, 0.0, Seed(0)).unwrap().is_empty());
    }
}
