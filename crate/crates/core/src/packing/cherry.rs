//! Triangle factors of cherries: two dense pairs `(U, V)`, `(W, V)` sharing
//! the centre `V`, completed with random `U–W` edges.

use super::aux::{build_f, build_h, random_greedy_matching_on};
use super::{cover_with, Diagnostics, PackOutcome};
use crate::error::{invalid, same_universe, Result};
use crate::generators::ceil_tol;
use crate::graph::{Graph, GraphBuilder, VertexSet};
use crate::oracle::{hall_violator, max_bipartite_matching, max_bipartite_matching_from, Matching, TrianglePacking};
use crate::overlay::Overlay;
use crate::regularity::{is_super_regular, Mode, SuperRegularFailure};
use crate::rng::Seed;

const TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Cherry {
    pub u: VertexSet,
    pub v: VertexSet,
    pub w: VertexSet,
}

impl Cherry {
    pub fn new(u: VertexSet, v: VertexSet, w: VertexSet) -> Result<Self> {
        let n = v.universe();
        same_universe(n, &[&u, &w])?;
        if !u.is_disjoint(&v) || !u.is_disjoint(&w) || !v.is_disjoint(&w) {
            return Err(invalid("U, V, W must be pairwise disjoint"));
        }
        if u.len() != w.len() {
            return Err(invalid(format!("|U| = {} differs from |W| = {}", u.len(), w.len())));
        }
        Ok(Self { u, v, w })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CherryMode {
    /// `|U| = |W| = |V|`.
    Balanced,
    /// `(1 − δ₀)|V| ≤ |U| = |W| ≤ (1 − δ)|V|`.
    Unbalanced,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CherryParams {
    /// Pair density; `F` keeps pairs with at least `d²|V|/2` common centres.
    pub d: f64,
    pub delta: f64,
    pub delta0: f64,
    /// Balanced mode: share of `U` left to the second round.
    pub leftover_fraction: f64,
    /// Sampled super-regularity report on `H(M, V)`.
    pub check_eps: f64,
    pub check_trials: usize,
}

impl Default for CherryParams {
    fn default() -> Self {
        Self { d: 0.5, delta: 0.05, delta0: 0.15, leftover_fraction: 0.25, check_eps: 0.1, check_trials: 32 }
    }
}

/// Triangle factor of a cherry in `g ∪ G(n, p)`.
pub fn cherry_factor(
    g: &Graph,
    cherry: &Cherry,
    p: f64,
    mode: CherryMode,
    params: &CherryParams,
    seed: Seed,
) -> Result<PackOutcome> {
    same_universe(g.n(), &[&cherry.u, &cherry.v, &cherry.w])?;
    let overlay = Overlay::new(g.n(), p, seed)?;
    let mut diagnostics = Diagnostics::default();
    let packing = match mode {
        CherryMode::Balanced => {
            if cherry.u.len() != cherry.v.len() {
                return Err(invalid("balanced cherry needs |U| = |W| = |V|"));
            }
            let rounds = overlay.split(2);
            balanced(g, cherry, params, &rounds[0], &rounds[1], seed, &mut diagnostics)?
        }
        CherryMode::Unbalanced => {
            check_unbalanced(cherry, params)?;
            diagnostics.round("G", &overlay);
            unbalanced(g, cherry, params, &overlay, seed, &mut diagnostics)?
        }
    };
    let out = PackOutcome { packing, overlay, diagnostics };
    out.validate(g)?;
    Ok(out)
}

fn check_unbalanced(c: &Cherry, prm: &CherryParams) -> Result<()> {
    let (nu, nv) = (c.u.len() as f64, c.v.len() as f64);
    if nu + TOL < (1.0 - prm.delta0) * nv || nu > (1.0 - prm.delta) * nv + TOL {
        return Err(invalid(format!(
            "unbalanced cherry needs (1−δ₀)|V| ≤ |U| ≤ (1−δ)|V|, got |U| = {nu}, |V| = {nv}"
        )));
    }
    if !(2 * c.u.len() + c.v.len()).is_multiple_of(3) {
        return Err(invalid("|U| + |V| + |W| must be divisible by 3"));
    }
    Ok(())
}

/// `F` edges present in `g` or in the round.
fn reveal(f: &Graph, g: &Graph, r: &Overlay) -> Graph {
    let mut b = GraphBuilder::new(f.n());
    for (x, y) in f.edges() {
        if g.has_edge(x, y) || r.has_edge(x, y) {
            b.add(x, y);
        }
    }
    b.build()
}

fn report_h(g: &Graph, m: &Matching, v: &VertexSet, prm: &CherryParams, seed: Seed, diag: &mut Diagnostics) -> Result<()> {
    if m.is_empty() || v.is_empty() {
        return Ok(());
    }
    let h = build_h(g, m, v)?;
    let mode = Mode::Sampled { trials: prm.check_trials, seed: seed.derive_str("check") };
    let verdict = is_super_regular(&h.graph, &h.left, &h.right, prm.check_eps, prm.d * prm.d / 2.0, mode)?;
    diag.note(match verdict {
        Ok(()) => "H(M, V): no super-regularity failure found by sampling".to_string(),
        Err(SuperRegularFailure::LowDegree { degree, required, .. }) => {
            format!("H(M, V): a vertex has degree {degree} below {required:.1}")
        }
        Err(SuperRegularFailure::SparseSubpair(w)) => {
            format!("H(M, V): sparse sub-pair {}×{} of density {:.3}", w.x.len(), w.y.len(), w.density)
        }
    });
    Ok(())
}

/// Two rounds: random greedy matching in `F̃₁` up to `(1 − leftover)|V|`,
/// then a maximum matching of the leftovers in `F̃₂`; if that is not
/// perfect, the whole matching is augmented in `F̃₁ ∪ F̃₂`. Finally a
/// maximum matching of `H(M, V)`.
pub(crate) fn balanced(
    g: &Graph,
    c: &Cherry,
    prm: &CherryParams,
    r1: &Overlay,
    r2: &Overlay,
    seed: Seed,
    diag: &mut Diagnostics,
) -> Result<TrianglePacking> {
    diag.round("F1", r1);
    diag.round("F2", r2);
    let n = g.n();
    let nv = c.v.len();
    if nv == 0 {
        return Ok(TrianglePacking::new());
    }
    let f = build_f(g, &c.u, &c.w, &c.v, prm.d)?;
    let f1 = reveal(&f, g, r1);
    let target = ceil_tol((1.0 - prm.leftover_fraction) * nv as f64).min(c.u.len());
    let m1 = random_greedy_matching_on(&f1, target, seed.derive_str("greedy"));
    if m1.len() < target {
        diag.note(format!("greedy matching reached {} of {target}", m1.len()));
    }
    report_h(g, &m1, &c.v, prm, seed, diag)?;

    let covered = m1.vertices(n);
    let u1 = c.u.difference(&covered);
    let w1 = c.w.difference(&covered);
    let f2 = reveal(&f.restrict_between(&u1, &w1), g, r2);
    let m2 = max_bipartite_matching(&f2, &u1, &w1)?;
    let mut full = Matching { edges: m1.edges.iter().chain(&m2.edges).copied().collect() };
    if m2.len() < u1.len() {
        if let Some(s) = hall_violator(&f2, &u1, &w1)? {
            diag.note(format!("leftover matching {} of {}; Hall violator of size {}", m2.len(), u1.len(), s.len()));
        }
        let both = f1.union(&f2)?;
        full = max_bipartite_matching_from(&both, &c.u, &c.w, &full)?;
        diag.note(format!("augmented in F1 ∪ F2 to {} of {}", full.len(), c.u.len()));
    }

    let h = build_h(g, &full, &c.v)?;
    let hm = max_bipartite_matching(&h.graph, &h.left, &h.right)?;
    if hm.len() < nv {
        diag.note(format!("H matching covers {} of {nv} centres", hm.len()));
    }
    Ok(h.triangles(&hm))
}

/// One round: random greedy matching trimmed to `|V| − 4(|V| − |U|)/3`
/// edges, each remaining `U ∪ W` vertex gets two adjacent centres, then a
/// maximum matching of `H(M', V_rest)`.
pub(crate) fn unbalanced(
    g: &Graph,
    c: &Cherry,
    prm: &CherryParams,
    r: &Overlay,
    seed: Seed,
    diag: &mut Diagnostics,
) -> Result<TrianglePacking> {
    let n = g.n();
    let (nu, nv) = (c.u.len(), c.v.len());
    if nv == 0 || nu == 0 {
        return Ok(TrianglePacking::new());
    }
    let keep = nv - 4 * (nv - nu) / 3;
    let f = build_f(g, &c.u, &c.w, &c.v, prm.d)?;
    let f1 = reveal(&f, g, r);
    let target = ceil_tol((1.0 - prm.delta) * nv as f64).min(nu);
    let mut m = random_greedy_matching_on(&f1, target, seed.derive_str("greedy"));
    if m.len() < keep {
        diag.note(format!("greedy matching reached {} of {keep}; augmenting", m.len()));
        m = max_bipartite_matching_from(&f1, &c.u, &c.w, &m)?;
    }
    if m.len() < keep {
        diag.note(format!("matching has {} edges, {keep} needed", m.len()));
    }
    m.edges.truncate(keep);
    report_h(g, &m, &c.v, prm, seed, diag)?;

    let rest = c.u.union(&c.w).difference(&m.vertices(n));
    let mut centres = c.v.clone();
    let cover = cover_with(g, rest.iter(), &mut centres, usize::MAX, |x, y| g.has_edge(x, y) || r.has_edge(x, y));
    if !cover.uncovered.is_empty() {
        diag.note(format!("{} leftover vertices found no centre edge", cover.uncovered.len()));
    }
    let h = build_h(g, &m, &centres)?;
    let hm = max_bipartite_matching(&h.graph, &h.left, &h.right)?;
    if hm.len() < m.len() || hm.len() < centres.len() {
        diag.note(format!("H matching {} for {} edges and {} centres", hm.len(), m.len(), centres.len()));
    }
    let mut out = cover.packing;
    out.extend(&h.triangles(&hm));
    Ok(out)
}

/// Smallest `m ≥ 0` with `|U| − m ≥ (1 − δ₀)(|V| − 4m)`.
pub fn balance_count(u_len: usize, v_len: usize, delta0: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&delta0) {
        return Err(invalid(format!("δ₀ = {delta0} must lie in [0, 1)")));
    }
    (0..=u_len.min(v_len / 4))
        .find(|&m| (u_len - m) as f64 + TOL >= (1.0 - delta0) * (v_len - 4 * m) as f64)
        .ok_or_else(|| invalid("no balancing count exists"))
}

/// Removes `2m` triangles, each on two centres joined in `overlay` and one
/// vertex taken alternately from `U` and `W`, so that the rest of the cherry
/// satisfies `(1 − δ₀)|V| ≤ |U| = |W|`.
pub fn balance_cherry(
    g: &Graph,
    cherry: &Cherry,
    delta0: f64,
    overlay: &Graph,
) -> Result<(TrianglePacking, Cherry, Diagnostics)> {
    same_universe(g.n(), &[&cherry.u, &cherry.v, &cherry.w])?;
    if overlay.n() != g.n() {
        return Err(invalid("overlay and graph have different vertex counts"));
    }
    if cherry.u.len() != cherry.w.len() {
        return Err(invalid("balancing needs |U| = |W|"));
    }
    let m = balance_count(cherry.u.len(), cherry.v.len(), delta0)?;
    let mut diag = Diagnostics::default();
    let mut centres = cherry.v.clone();
    let mut out = TrianglePacking::new();
    let mut sides = [cherry.u.to_vec().into_iter(), cherry.w.to_vec().into_iter()];
    'outer: for i in 0..2 * m {
        for x in sides[i % 2].by_ref() {
            let cand = g.neighbors_in(x, &centres);
            if let Some((a, b)) = super::find_edge(&cand, |a, b| overlay.has_edge(a, b)) {
                out.push(x, a, b);
                centres.remove(a);
                centres.remove(b);
                continue 'outer;
            }
        }
        diag.note(format!("balancing stopped after {} of {} triangles", out.len(), 2 * m));
        break;
    }
    let used = out.vertices(g.n());
    let rest = Cherry { u: cherry.u.difference(&used), v: centres, w: cherry.w.difference(&used) };
    Ok((out, rest, diag))
}
