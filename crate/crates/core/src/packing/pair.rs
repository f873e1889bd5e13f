//! Triangle factor of a dense pair `(u, v)` split into two unbalanced cherries.

use rand::Rng;

use super::cherry::{unbalanced, Cherry, CherryParams};
use super::{Diagnostics, PackOutcome};
use crate::error::{invalid, same_universe, Result};
use crate::graph::{Graph, VertexSet};
use crate::oracle::TrianglePacking;
use crate::overlay::Overlay;
use crate::rng::Seed;

/// Split probabilities `(q₁, q₂)`: each vertex of `v` joins `U₂` and `W₂` with
/// probability `q₁` each, each vertex of `u` joins `U₁` and `W₁` with
/// probability `q₂` each, and the rest are the centres. They solve
///
/// ```text
/// q₂|u| = c(1 − 2q₁)|v|
/// q₁|v| = c(1 − 2q₂)|u|
/// ```
///
/// so both cherries have `E|U_i| = c·E|V_i|`.
pub fn solve_split(u_len: usize, v_len: usize, c: f64) -> Result<(f64, f64)> {
    if u_len == 0 || v_len == 0 {
        return Err(invalid("both sides must be non-empty"));
    }
    if !(c > 0.5 && c <= 1.0) {
        return Err(invalid(format!("ratio c = {c} must lie in (1/2, 1]")));
    }
    let (u, v) = (u_len as f64, v_len as f64);
    let det = 4.0 * c * c - 1.0;
    let q1 = c * (2.0 * c * v - u) / (v * det);
    let q2 = c * (2.0 * c * u - v) / (u * det);
    if !(q1 > 0.0 && q1 < 0.5 && q2 > 0.0 && q2 < 0.5) {
        return Err(invalid(format!("split probabilities ({q1:.4}, {q2:.4}) outside (0, 1/2)")));
    }
    Ok((q1, q2))
}

pub fn pair_factor(g: &Graph, u: &VertexSet, v: &VertexSet, p: f64, seed: Seed) -> Result<PackOutcome> {
    pair_factor_with(g, u, v, p, seed, &CherryParams::default())
}

/// Exact part sizes `(centres, leaves per side)` for both cherries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Sizes {
    /// `|V₁|` (from `v`) and `|U₂| = |W₂|`.
    a: usize,
    b: usize,
    /// `|V₂|` (from `u`) and `|U₁| = |W₁|`.
    c: usize,
    e: usize,
}

fn feasible(s: Sizes, prm: &CherryParams) -> bool {
    let ok = |leaves: usize, centres: usize| {
        let (l, c) = (leaves as f64, centres as f64);
        centres > 0 && l + 1e-9 >= (1.0 - prm.delta0) * c && l <= (1.0 - prm.delta) * c + 1e-9 && (2 * leaves + centres).is_multiple_of(3)
    };
    ok(s.e, s.a) && ok(s.b, s.c)
}

/// Random split, then the feasible sizes closest to the sampled ones.
#[allow(clippy::type_complexity)]
pub fn pair_factor_with(g: &Graph, u: &VertexSet, v: &VertexSet, p: f64, seed: Seed, prm: &CherryParams) -> Result<PackOutcome> {
    let n = g.n();
    same_universe(n, &[u, v])?;
    if !u.is_disjoint(v) {
        return Err(invalid("u and v must be disjoint"));
    }
    let (nu, nv) = (u.len(), v.len());
    if 4 * nu < 3 * nv || nu > nv {
        return Err(invalid(format!("need 3|v|/4 ≤ |u| ≤ |v|, got |u| = {nu}, |v| = {nv}")));
    }
    if (nu + nv) % 3 != 0 {
        return Err(invalid("|u| + |v| must be divisible by 3"));
    }
    let overlay = Overlay::new(n, p, seed)?;
    let mut diag = Diagnostics::default();
    let c = 1.0 - (prm.delta0 + prm.delta) / 2.0;
    let (q1, q2) = solve_split(nu, nv, c)?;
    diag.note(format!("split probabilities q1 = {q1:.4}, q2 = {q2:.4}"));

    // groups[0] = centres, groups[1], groups[2] = the two leaf sides
    let mut rng = seed.derive_str("split").rng();
    let mut split = |side: &VertexSet, q: f64| {
        let mut groups = [Vec::new(), Vec::new(), Vec::new()];
        for x in side.iter() {
            let r: f64 = rng.gen();
            let k = if r < q { 1 } else if r < 2.0 * q { 2 } else { 0 };
            groups[k].push(x);
        }
        groups
    };
    let mut from_v = split(v, q1);
    let mut from_u = split(u, q2);

    let mut best: Option<(usize, Sizes)> = None;
    for b in 0..=nv / 2 {
        for e in 0..=nu / 2 {
            let s = Sizes { a: nv - 2 * b, b, c: nu - 2 * e, e };
            if !feasible(s, prm) {
                continue;
            }
            let cost = s.a.abs_diff(from_v[0].len())
                + s.b.abs_diff(from_v[1].len())
                + s.b.abs_diff(from_v[2].len())
                + s.c.abs_diff(from_u[0].len())
                + s.e.abs_diff(from_u[1].len())
                + s.e.abs_diff(from_u[2].len());
            if best.is_none_or(|(bc, _)| cost < bc) {
                best = Some((cost, s));
            }
        }
    }
    let Some((moved, sizes)) = best else {
        return Err(invalid("no feasible split sizes for this pair"));
    };
    diag.note(format!("rebalanced by moving {} vertices", moved / 2));
    rebalance(&mut from_v, [sizes.a, sizes.b, sizes.b]);
    rebalance(&mut from_u, [sizes.c, sizes.e, sizes.e]);

    let set = |xs: &[usize]| VertexSet::from_vertices(n, xs.iter().copied());
    let c1 = Cherry::new(set(&from_u[1])?, set(&from_v[0])?, set(&from_u[2])?)?;
    let c2 = Cherry::new(set(&from_v[1])?, set(&from_u[0])?, set(&from_v[2])?)?;
    diag.round("G", &overlay);
    let mut packing = TrianglePacking::new();
    for (i, ch) in [c1, c2].iter().enumerate() {
        let mut sd = Diagnostics::default();
        let t = unbalanced(g, ch, prm, &overlay, seed.derive_str(if i == 0 { "cherry1" } else { "cherry2" }), &mut sd)?;
        diag.absorb(&format!("cherry {}", i + 1), sd);
        packing.extend(&t);
    }
    let out = PackOutcome { packing, overlay, diagnostics: diag };
    out.validate(g)?;
    Ok(out)
}

/// Moves the lowest-index surplus vertices of each group to groups below
/// their target size.
fn rebalance(groups: &mut [Vec<usize>; 3], target: [usize; 3]) {
    let mut spare = Vec::new();
    for (g, &t) in groups.iter_mut().zip(&target) {
        if g.len() > t {
            let extra = g.len() - t;
            spare.extend(g.drain(..extra));
        }
    }
    spare.sort_unstable();
    let mut spare = spare.into_iter();
    for (g, &t) in groups.iter_mut().zip(&target) {
        while g.len() < t {
            g.push(spare.next().expect("sizes add up"));
        }
        g.sort_unstable();
    }
}
