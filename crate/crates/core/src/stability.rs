//! (α, β)-stability: exact verification of a given partition and a sound
//! heuristic search for one.
//!
//! A partition (A, B) is (α, β)-stable when
//! `|A| ∈ (α ± β)n`, `|B| ∈ (1 − α ± β)n`, every vertex has at least `αn/4`
//! neighbours across the cut, and all but `βn` vertices of each side miss at
//! most `βn` vertices of the other side.

use std::fmt;

use crate::error::{invalid, Result};
use crate::generators::ceil_tol;
use crate::graph::{Graph, VertexSet};

const TOL: f64 = 1e-9;

/// Every measurement behind a stability verdict.
#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub holds: bool,
    pub a: VertexSet,
    pub b: VertexSet,
    pub alpha: f64,
    pub beta: f64,
    /// `|A| − αn`; must lie in `[−βn, βn]`.
    pub a_slack: f64,
    /// `|B| − (1 − α)n`; must lie in `[−βn, βn]`.
    pub b_slack: f64,
    pub cut_min_degree: usize,
    /// `αn/4`.
    pub cut_floor: f64,
    /// A-vertices with fewer than `|B| − βn` neighbours in B.
    pub exceptional_a: usize,
    /// B-vertices with fewer than `|A| − βn` neighbours in A.
    pub exceptional_b: usize,
    /// `βn`.
    pub exception_budget: f64,
}

impl StabilityReport {
    pub fn sizes_ok(&self) -> bool {
        let bn = self.beta * self.a.universe() as f64;
        self.a_slack.abs() <= bn + TOL && self.b_slack.abs() <= bn + TOL && (self.alpha <= 0.0 || !self.a.is_empty())
    }

    pub fn cut_ok(&self) -> bool {
        self.cut_min_degree as f64 + TOL >= self.cut_floor
    }

    pub fn exceptions_ok(&self) -> bool {
        self.exceptional_a as f64 <= self.exception_budget + TOL && self.exceptional_b as f64 <= self.exception_budget + TOL
    }

    pub fn summary(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for StabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: |A|={} (slack {:+.3}), |B|={} (slack {:+.3}), cut δ={} vs {:.3}, exceptional A={} B={} vs {:.3}",
            if self.holds { "stable" } else { "not stable" },
            self.a.len(),
            self.a_slack,
            self.b.len(),
            self.b_slack,
            self.cut_min_degree,
            self.cut_floor,
            self.exceptional_a,
            self.exceptional_b,
            self.exception_budget,
        )
    }
}

/// Checks every clause of (α, β)-stability for the partition `(a, b)`.
///
/// We additionally require `A ≠ ∅` whenever `α > 0`.
pub fn verify_stability(g: &Graph, a: &VertexSet, b: &VertexSet, alpha: f64, beta: f64) -> Result<StabilityReport> {
    let n = g.n();
    if a.universe() != n || b.universe() != n {
        return Err(invalid("vertex set universe does not match graph"));
    }
    if !a.is_disjoint(b) || a.len() + b.len() != n {
        return Err(invalid("(A, B) is not a partition of the vertex set"));
    }
    let nf = n as f64;
    let bn = beta * nf;
    let cut_min_degree = (0..n)
        .map(|v| if a.contains(v) { g.deg_in(v, b) } else { g.deg_in(v, a) })
        .min()
        .unwrap_or(0);
    let exceptional_a = a.iter().filter(|&v| (g.deg_in(v, b) as f64) + TOL < b.len() as f64 - bn).count();
    let exceptional_b = b.iter().filter(|&v| (g.deg_in(v, a) as f64) + TOL < a.len() as f64 - bn).count();
    let mut r = StabilityReport {
        holds: false,
        a: a.clone(),
        b: b.clone(),
        alpha,
        beta,
        a_slack: a.len() as f64 - alpha * nf,
        b_slack: b.len() as f64 - (1.0 - alpha) * nf,
        cut_min_degree,
        cut_floor: alpha * nf / 4.0,
        exceptional_a,
        exceptional_b,
        exception_budget: bn,
    };
    r.holds = r.sizes_ok() && r.cut_ok() && r.exceptions_ok();
    Ok(r)
}

/// Which candidate construction produced a verified partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StableStrategy {
    /// Low-degree seed refined by the internal-degree and near-full-degree
    /// filters; the seed threshold is recorded.
    Threshold { seed_index: usize },
    /// The ⌈αn⌉ highest-degree vertices as A.
    TopDegree,
    /// The smaller side of a local-search maximum cut as A.
    MaxCut,
}

/// Searches for an (α, β)-stable partition. Anything returned has passed
/// [`verify_stability`]; `None` only means no witness was found.
pub fn find_stable_partition(g: &Graph, alpha: f64, beta: f64) -> Option<(VertexSet, VertexSet)> {
    find_stable_partition_with(g, alpha, beta).map(|(a, b, _)| (a, b))
}

pub fn find_stable_partition_with(g: &Graph, alpha: f64, beta: f64) -> Option<(VertexSet, VertexSet, StableStrategy)> {
    let n = g.n();
    if n == 0 {
        return None;
    }
    let accept = |a: &VertexSet, b: &VertexSet| verify_stability(g, a, b, alpha, beta).map(|r| r.holds).unwrap_or(false);
    let nf = n as f64;
    let deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();

    // Seeds for B'': vertices of degree at most each threshold, plus the
    // (1 − α)n lowest-degree vertices.
    let mut by_deg: Vec<usize> = (0..n).collect();
    by_deg.sort_by_key(|&v| (deg[v], v));
    let b_target = n - ceil_tol(alpha * nf).min(n);
    let seeds = [
        VertexSet::from_vertices(n, (0..n).filter(|&v| deg[v] as f64 <= (1.0 - alpha + beta) * nf + TOL)).ok()?,
        VertexSet::from_vertices(n, (0..n).filter(|&v| deg[v] as f64 <= (alpha + beta) * nf + TOL)).ok()?,
        VertexSet::from_vertices(n, (0..n).filter(|&v| 2 * deg[v] <= n)).ok()?,
        VertexSet::from_vertices(n, by_deg[..b_target].iter().copied()).ok()?,
    ];
    for (i, seed) in seeds.iter().enumerate() {
        if let Some((a, b)) = refine_from_seed(g, seed, alpha, beta) {
            if accept(&a, &b) {
                return Some((a, b, StableStrategy::Threshold { seed_index: i }));
            }
        }
    }

    let a_size = ceil_tol(alpha * nf).clamp(1, n);
    let mut top = by_deg.clone();
    top.sort_by_key(|&v| (std::cmp::Reverse(deg[v]), v));
    let a = VertexSet::from_vertices(n, top[..a_size].iter().copied()).ok()?;
    let b = a.complement();
    if accept(&a, &b) {
        return Some((a, b, StableStrategy::TopDegree));
    }

    let (x, y) = crate::packing::max_cut_bipartition(g);
    let (a, b) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    if accept(&a, &b) {
        return Some((a, b, StableStrategy::MaxCut));
    }
    None
}

/// B' = seed vertices with at most βn neighbours inside the seed;
/// A' = vertices with at least (1 − β/4)|B'| neighbours in B';
/// the rest go to the side that maximises their cut degree; finally sizes are
/// pulled into the (α ± β)n window.
fn refine_from_seed(g: &Graph, seed: &VertexSet, alpha: f64, beta: f64) -> Option<(VertexSet, VertexSet)> {
    let n = g.n();
    let nf = n as f64;
    let b1 = VertexSet::from_vertices(n, seed.iter().filter(|&v| g.deg_in(v, seed) as f64 <= beta * nf + TOL)).ok()?;
    if b1.is_empty() {
        return None;
    }
    let need = (1.0 - beta / 4.0) * b1.len() as f64;
    let a1 = VertexSet::from_vertices(n, (0..n).filter(|&v| !b1.contains(v) && g.deg_in(v, &b1) as f64 + TOL >= need)).ok()?;
    let mut a = a1.clone();
    let mut b = b1.clone();
    for v in 0..n {
        if a1.contains(v) || b1.contains(v) {
            continue;
        }
        if g.deg_in(v, &b1) >= g.deg_in(v, &a1) {
            a.insert(v);
        } else {
            b.insert(v);
        }
    }

    let lo = ((alpha - beta) * nf - TOL).ceil().max(if alpha > 0.0 { 1.0 } else { 0.0 }) as usize;
    let hi = ((alpha + beta) * nf + TOL).floor() as usize;
    if lo > hi || hi > n {
        return None;
    }
    // Too many in A: demote those with the fewest neighbours in B.
    while a.len() > hi {
        let v = a.iter().min_by_key(|&v| (g.deg_in(v, &b), v))?;
        a.remove(v);
        b.insert(v);
    }
    // Too few in A: promote B-vertices with the most neighbours in B.
    while a.len() < lo {
        let v = b.iter().max_by_key(|&v| (g.deg_in(v, &b), std::cmp::Reverse(v)))?;
        b.remove(v);
        a.insert(v);
    }
    Some((a, b))
}
