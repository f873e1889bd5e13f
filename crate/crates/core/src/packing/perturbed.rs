//! Top-level solver: `min(δ, ⌊n/3⌋)` triangles in `g ∪ G(n, p)` where the
//! constructions apply, the largest of several heuristics otherwise.

use super::extremal::{extremal_pack_with, ExtremalParams};
use super::pair::pair_factor_with;
use super::round_greedy::round_greedy_within;
use super::sublinear::{sublinear_within, SublinearParams};
use super::{greedy_triangle_packing, max_cut_bipartition, union_within, Diagnostics, PackOutcome};
use crate::error::Result;
use crate::graph::{Graph, VertexSet};
use crate::overlay::Overlay;
use crate::regularity::density;
use crate::rng::Seed;
use crate::stability::find_stable_partition;

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbedParams {
    /// Stability parameter used when searching for a partition.
    pub beta: f64,
    /// Minimum cut density for trying the pair factor.
    pub pair_density: f64,
    pub extremal: ExtremalParams,
    pub sublinear: SublinearParams,
}

impl Default for PerturbedParams {
    fn default() -> Self {
        Self { beta: 0.05, pair_density: 0.5, extremal: ExtremalParams::default(), sublinear: SublinearParams::default() }
    }
}

pub fn perturbed_pack(g: &Graph, p: f64, seed: Seed) -> Result<PackOutcome> {
    perturbed_pack_with(g, p, seed, &PerturbedParams::default())
}

/// Every strategy below reads the same overlay `G(n, p)` drawn from `seed`,
/// so trying several of them does not spend more randomness.
pub fn perturbed_pack_with(g: &Graph, p: f64, seed: Seed, params: &PerturbedParams) -> Result<PackOutcome> {
    let n = g.n();
    let overlay = Overlay::new(n, p, seed)?;
    let m = g.min_degree().min(n / 3);
    if n < 9 || m == 0 {
        return Ok(PackOutcome::empty(n, overlay, "perturbed: nothing to pack"));
    }
    let all = VertexSet::full(n);
    let mut diag = Diagnostics::default();
    diag.note(format!("perturbed: target {m}"));

    if 256 * m <= n {
        let mut sd = Diagnostics::default();
        let packing = sublinear_within(g, &all, m, &overlay, &params.sublinear, &mut sd);
        diag.absorb("sublinear", sd);
        let out = PackOutcome { packing, overlay, diagnostics: diag };
        out.validate(g)?;
        return Ok(out);
    }

    let mut best: Best = None;

    let alpha = (m as f64 / n as f64).min(1.0 / 3.0);
    match find_stable_partition(g, alpha, params.beta) {
        Some((a, b)) => match extremal_pack_with(g, &a, &b, alpha, params.beta, p, seed, &params.extremal) {
            Ok(out) => offer(&mut best, "extremal", out, &mut diag),
            Err(e) => diag.note(format!("extremal failed: {e}")),
        },
        None => diag.note(format!("no ({alpha:.3}, {})-stable partition found", params.beta)),
    }

    if best.as_ref().is_none_or(|(_, b)| b.len() < m) {
        let h = union_within(g, &overlay, &all);
        let packing = greedy_triangle_packing(&h, &all, usize::MAX);
        offer(&mut best, "greedy", PackOutcome { packing, overlay: overlay.clone(), diagnostics: Diagnostics::default() }, &mut diag);

        let mut sd = Diagnostics::default();
        let packing = round_greedy_within(g, &all, m, &overlay, &mut sd);
        offer(&mut best, "round greedy", PackOutcome { packing, overlay: overlay.clone(), diagnostics: sd }, &mut diag);

        let (x, y) = max_cut_bipartition(g);
        let (u, mut v) = if x.len() <= y.len() { (x, y) } else { (y, x) };
        while !v.is_empty() && (u.len() + v.len()) % 3 != 0 {
            let drop = v.iter().min_by_key(|&z| (g.deg_in(z, &u), z)).expect("non-empty");
            v.remove(drop);
        }
        let dense = !u.is_empty() && !v.is_empty() && density(g, &u, &v)? >= params.pair_density;
        if dense && 4 * u.len() >= 3 * v.len() {
            match pair_factor_with(g, &u, &v, p, seed, &params.extremal.cherry) {
                Ok(out) => offer(&mut best, "pair", out, &mut diag),
                Err(e) => diag.note(format!("pair factor skipped: {e}")),
            }
        }
    }

    let (name, mut out) = best.expect("at least one strategy ran");
    debug_assert_eq!(out.overlay, overlay);
    diag.note(format!("perturbed: chose {name}"));
    let inner = std::mem::take(&mut out.diagnostics);
    diag.absorb(&name, inner);
    out.diagnostics = diag;
    out.validate(g)?;
    Ok(out)
}

type Best = Option<(String, PackOutcome)>;

fn offer(best: &mut Best, name: &str, cand: PackOutcome, diag: &mut Diagnostics) {
    diag.note(format!("{name}: {} triangles", cand.len()));
    if best.as_ref().is_none_or(|(_, b)| cand.len() > b.len()) {
        *best = Some((name.to_string(), cand));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_without_overlay() {
        for n in [9, 12, 30] {
            let out = perturbed_pack(&Graph::complete(n), 0.0, Seed(4)).unwrap();
            assert_eq!(out.len(), n / 3, "n = {n}");
        }
    }

    #[test]
    fn edgeless_graph() {
        assert!(perturbed_pack(&Graph::empty(20), 0.0, Seed(4)).unwrap().is_empty());
    }
}
