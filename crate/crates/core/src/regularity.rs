//! Density, ε-regularity and super-regularity at small scale.

use rand::seq::index::sample;

use crate::error::{invalid, Result};
use crate::generators::ceil_tol;
use crate::graph::{Graph, VertexSet};
use crate::rng::Seed;

/// Largest side accepted by the exhaustive testers.
pub const EXHAUSTIVE_MAX_SIDE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Exact; both sides at most [`EXHAUSTIVE_MAX_SIDE`].
    Exhaustive,
    /// Random sub-pairs of the minimum qualifying sizes. One-sided.
    Sampled { trials: usize, seed: Seed },
}

/// Sub-pair `(X, Y)` with its density.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub x: VertexSet,
    pub y: VertexSet,
    pub density: f64,
}

/// Summary of a pair: overall density, minimum cross-degrees and, if found,
/// a regularity witness.
#[derive(Clone, Debug, PartialEq)]
pub struct PairStats {
    pub density: f64,
    pub min_degree_a: usize,
    pub min_degree_b: usize,
    pub witness: Option<Witness>,
}

fn check_pair(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<()> {
    if a.universe() != g.n() || b.universe() != g.n() {
        return Err(invalid("vertex set universe does not match graph"));
    }
    if !a.is_disjoint(b) {
        return Err(invalid("pair sides overlap"));
    }
    if a.is_empty() || b.is_empty() {
        return Err(invalid("pair side is empty"));
    }
    Ok(())
}

fn edges_between(g: &Graph, a: &VertexSet, b: &VertexSet) -> usize {
    a.iter().map(|v| g.deg_in(v, b)).sum()
}

/// e(a, b) / (|a|·|b|).
pub fn density(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<f64> {
    check_pair(g, a, b)?;
    Ok(edges_between(g, a, b) as f64 / (a.len() * b.len()) as f64)
}

pub fn pair_stats(g: &Graph, a: &VertexSet, b: &VertexSet, eps: f64, mode: Mode) -> Result<PairStats> {
    Ok(PairStats {
        density: density(g, a, b)?,
        min_degree_a: a.iter().map(|v| g.deg_in(v, b)).min().unwrap_or(0),
        min_degree_b: b.iter().map(|v| g.deg_in(v, a)).min().unwrap_or(0),
        witness: regularity_refute(g, a, b, eps, mode)?,
    })
}

/// Smallest size a qualifying subset of a side of size `len` may have.
fn min_part(eps: f64, len: usize) -> usize {
    ceil_tol(eps * len as f64).max(1)
}

/// Enumerates every `X ⊆ a` with `|X| ≥ ⌈ε|a|⌉`. For each X and each size k,
/// the extreme densities over `|Y| = k` come from the k lowest and k highest
/// degrees into X, so scanning those extremes is exact.
///
/// `judge(|X|, k, sum)` returns true when the sub-pair is a witness.
fn exhaustive_scan(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    eps: f64,
    lows_only: bool,
    mut judge: impl FnMut(usize, usize, usize) -> bool,
) -> Result<Option<Witness>> {
    if a.len() > EXHAUSTIVE_MAX_SIDE || b.len() > EXHAUSTIVE_MAX_SIDE {
        return Err(invalid(format!("exhaustive mode needs sides ≤ {EXHAUSTIVE_MAX_SIDE}, got {} and {}", a.len(), b.len())));
    }
    let n = g.n();
    let av = a.to_vec();
    let bv = b.to_vec();
    let kx = min_part(eps, av.len());
    let ky = min_part(eps, bv.len());
    // Bit i of adj_b[j] set iff av[i] ~ bv[j].
    let adj_b: Vec<u32> = bv
        .iter()
        .map(|&y| av.iter().enumerate().filter(|&(_, &x)| g.has_edge(x, y)).fold(0u32, |m, (i, _)| m | 1 << i))
        .collect();
    let mut order: Vec<(u32, usize)> = Vec::with_capacity(bv.len());
    for xm in 1u32..(1u32 << av.len()) {
        let xs = xm.count_ones() as usize;
        if xs < kx {
            continue;
        }
        order.clear();
        order.extend(adj_b.iter().enumerate().map(|(j, &m)| ((m & xm).count_ones(), j)));
        order.sort_unstable();
        let mut low = 0usize;
        let mut high = 0usize;
        for k in 1..=bv.len() {
            low += order[k - 1].0 as usize;
            high += order[bv.len() - k].0 as usize;
            if k < ky {
                continue;
            }
            let pick = if judge(xs, k, low) {
                Some(&order[..k])
            } else if !lows_only && judge(xs, k, high) {
                Some(&order[bv.len() - k..])
            } else {
                None
            };
            if let Some(ys) = pick {
                let x = VertexSet::from_vertices(n, (0..av.len()).filter(|i| xm >> i & 1 == 1).map(|i| av[i]))?;
                let y = VertexSet::from_vertices(n, ys.iter().map(|&(_, j)| bv[j]))?;
                let sum = ys.iter().map(|&(c, _)| c as usize).sum::<usize>();
                return Ok(Some(Witness { x, y, density: sum as f64 / (xs * k) as f64 }));
            }
        }
    }
    Ok(None)
}

fn sampled_scan(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    eps: f64,
    trials: usize,
    seed: Seed,
    mut judge: impl FnMut(usize, usize, usize) -> bool,
) -> Result<Option<Witness>> {
    let n = g.n();
    let av = a.to_vec();
    let bv = b.to_vec();
    let kx = min_part(eps, av.len());
    let ky = min_part(eps, bv.len());
    let mut rng = seed.rng();
    for _ in 0..trials {
        let x = VertexSet::from_vertices(n, sample(&mut rng, av.len(), kx).into_iter().map(|i| av[i]))?;
        let y = VertexSet::from_vertices(n, sample(&mut rng, bv.len(), ky).into_iter().map(|i| bv[i]))?;
        let sum = edges_between(g, &x, &y);
        if judge(kx, ky, sum) {
            return Ok(Some(Witness { x, y, density: sum as f64 / (kx * ky) as f64 }));
        }
    }
    Ok(None)
}

/// A sub-pair with `|X| ≥ ε|a|`, `|Y| ≥ ε|b|` and `|d(a,b) − d(X,Y)| > ε`.
///
/// Exhaustive mode returns one iff the pair is not ε-regular; sampled mode
/// returns one only if it happens to find it.
pub fn regularity_refute(g: &Graph, a: &VertexSet, b: &VertexSet, eps: f64, mode: Mode) -> Result<Option<Witness>> {
    check_pair(g, a, b)?;
    let e = edges_between(g, a, b) as f64;
    let ab = (a.len() * b.len()) as f64;
    // |e/ab − s/(xk)| > ε  ⇔  |e·xk − s·ab| > ε·ab·xk
    let judge = |xs: usize, k: usize, s: usize| {
        let xk = (xs * k) as f64;
        (e * xk - s as f64 * ab).abs() > eps * ab * xk + 1e-9
    };
    match mode {
        Mode::Exhaustive => exhaustive_scan(g, a, b, eps, false, judge),
        Mode::Sampled { trials, seed } => sampled_scan(g, a, b, eps, trials, seed, judge),
    }
}

/// Why a pair failed super-regularity.
#[derive(Clone, Debug, PartialEq)]
pub enum SuperRegularFailure {
    LowDegree { vertex: usize, degree: usize, required: f64 },
    SparseSubpair(Witness),
}

/// `Ok(())` if no failure was found, otherwise the first failure.
pub type SuperRegularity = std::result::Result<(), SuperRegularFailure>;

/// Degree clauses (every a-vertex has ≥ d|b| cross-neighbours and vice versa)
/// plus the density clause `d(X, Y) ≥ d` over qualifying sub-pairs.
pub fn is_super_regular(g: &Graph, a: &VertexSet, b: &VertexSet, eps: f64, d: f64, mode: Mode) -> Result<SuperRegularity> {
    check_pair(g, a, b)?;
    for (side, other) in [(a, b), (b, a)] {
        let required = d * other.len() as f64;
        for v in side.iter() {
            let degree = g.deg_in(v, other);
            if (degree as f64) + 1e-9 < required {
                return Ok(Err(SuperRegularFailure::LowDegree { vertex: v, degree, required }));
            }
        }
    }
    let judge = |xs: usize, k: usize, s: usize| (s as f64) + 1e-9 < d * (xs * k) as f64;
    let w = match mode {
        Mode::Exhaustive => exhaustive_scan(g, a, b, eps, true, judge)?,
        Mode::Sampled { trials, seed } => sampled_scan(g, a, b, eps, trials, seed, judge)?,
    };
    Ok(match w {
        Some(w) => Err(SuperRegularFailure::SparseSubpair(w)),
        None => Ok(()),
    })
}

/// `|{v ∈ a : deg(v, y) < (d − ε)|y|}|`.
pub fn mdl_count(g: &Graph, a: &VertexSet, b: &VertexSet, eps: f64, d: f64, y: &VertexSet) -> Result<usize> {
    check_pair(g, a, b)?;
    if !y.is_subset(b) {
        return Err(invalid("y is not a subset of b"));
    }
    if (y.len() as f64) + 1e-9 < eps * b.len() as f64 {
        return Err(invalid(format!("|y| = {} is below ε|b| = {}", y.len(), eps * b.len() as f64)));
    }
    let floor = (d - eps) * y.len() as f64;
    Ok(a.iter().filter(|&v| (g.deg_in(v, y) as f64) < floor).count())
}

/// Result of [`trim_super_regular`].
#[derive(Clone, Debug, PartialEq)]
pub struct Trimmed {
    pub a: VertexSet,
    pub b: VertexSet,
    pub removed_a: usize,
    pub removed_b: usize,
    /// Whether `|a'| ≥ (1−ε)|a|` and `|b'| ≥ (1−ε)|b|`.
    pub within_budget: bool,
}

/// Removes every vertex whose cross-degree is below `(d − ε)` times the size
/// of the (untrimmed) opposite side.
pub fn trim_super_regular(g: &Graph, a: &VertexSet, b: &VertexSet, eps: f64, d: f64) -> Result<Trimmed> {
    check_pair(g, a, b)?;
    let keep = |side: &VertexSet, other: &VertexSet| -> Result<VertexSet> {
        let floor = (d - eps) * other.len() as f64;
        VertexSet::from_vertices(g.n(), side.iter().filter(|&v| g.deg_in(v, other) as f64 >= floor))
    };
    let ta = keep(a, b)?;
    let tb = keep(b, a)?;
    let within_budget = ta.len() as f64 + 1e-9 >= (1.0 - eps) * a.len() as f64
        && tb.len() as f64 + 1e-9 >= (1.0 - eps) * b.len() as f64;
    Ok(Trimmed { removed_a: a.len() - ta.len(), removed_b: b.len() - tb.len(), a: ta, b: tb, within_budget })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_bipartite, random_bipartite};

    fn sides(n: usize, k: usize) -> (VertexSet, VertexSet) {
        (VertexSet::range(n, 0..k), VertexSet::range(n, k..n))
    }

    #[test]
    fn density_examples() {
        let g = complete_bipartite(3, 7).unwrap();
        let (a, b) = sides(7, 3);
        assert_eq!(density(&g, &a, &b).unwrap(), 1.0);
        assert_eq!(density(&Graph::empty(7), &a, &b).unwrap(), 0.0);
        let h = Graph::from_edges(4, &[(0, 2), (0, 3), (1, 2)]).unwrap();
        let (a, b) = sides(4, 2);
        assert_eq!(density(&h, &a, &b).unwrap(), 0.75);
        assert_eq!(density(&h, &b, &a).unwrap(), 0.75);
        assert!(density(&h, &a, &VertexSet::new(4)).is_err());
    }

    #[test]
    fn refute_examples() {
        let g = complete_bipartite(8, 16).unwrap();
        let (a, b) = sides(16, 8);
        assert!(regularity_refute(&g, &a, &b, 0.1, Mode::Exhaustive).unwrap().is_none());
        assert!(regularity_refute(&Graph::empty(16), &a, &b, 0.1, Mode::Exhaustive).unwrap().is_none());

        // A1 = 0..4, A2 = 4..8, B1 = 8..12, B2 = 12..16.
        let mut edges = Vec::new();
        for u in 0..4 {
            for v in 8..12 {
                edges.push((u, v));
                edges.push((u + 4, v + 4));
            }
        }
        let h = Graph::from_edges(16, &edges).unwrap();
        let w = regularity_refute(&h, &a, &b, 0.3, Mode::Exhaustive).unwrap().expect("witness");
        assert!((w.density - 0.5).abs() > 0.3);
        assert!(w.x.len() >= 3 && w.y.len() >= 3);
    }

    #[test]
    fn exhaustive_rejects_large_sides() {
        let (a, b) = sides(40, 20);
        assert!(regularity_refute(&Graph::empty(40), &a, &b, 0.1, Mode::Exhaustive).is_err());
    }

    #[test]
    fn super_regular_examples() {
        let g = complete_bipartite(6, 12).unwrap();
        let (a, b) = sides(12, 6);
        assert_eq!(is_super_regular(&g, &a, &b, 0.2, 1.0, Mode::Exhaustive).unwrap(), Ok(()));
        let mut bld = crate::graph::GraphBuilder::from_graph(&g);
        for v in 6..12 {
            bld.remove_edge(0, v);
        }
        let h = bld.build();
        match is_super_regular(&h, &a, &b, 0.2, 0.5, Mode::Exhaustive).unwrap() {
            Err(SuperRegularFailure::LowDegree { vertex: 0, degree: 0, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mdl_examples() {
        let (a, b) = sides(10, 5);
        let y = VertexSet::range(10, 5..8);
        assert_eq!(mdl_count(&complete_bipartite(5, 10).unwrap(), &a, &b, 0.2, 0.5, &y).unwrap(), 0);
        assert_eq!(mdl_count(&Graph::empty(10), &a, &b, 0.2, 0.5, &y).unwrap(), 5);
        assert!(mdl_count(&Graph::empty(10), &a, &b, 0.8, 0.9, &y).is_err());
    }

    #[test]
    fn trim_examples() {
        let g = complete_bipartite(5, 10).unwrap();
        let (a, b) = sides(10, 5);
        let t = trim_super_regular(&g, &a, &b, 0.1, 0.5).unwrap();
        assert_eq!((t.a.clone(), t.b.clone()), (a.clone(), b.clone()));
        let mut bld = crate::graph::GraphBuilder::from_graph(&g);
        for v in 5..10 {
            bld.remove_edge(2, v);
        }
        let t = trim_super_regular(&bld.build(), &a, &b, 0.1, 0.5).unwrap();
        assert_eq!(t.a.to_vec(), vec![0, 1, 3, 4]);
        assert_eq!(t.b, b);
    }

    #[test]
    fn sampled_finds_planted_hole() {
        let n = 200;
        let (a, b) = sides(n, 100);
        let g = random_bipartite(&a, &b, 1.0, Seed(0)).unwrap();
        assert!(regularity_refute(&g, &a, &b, 0.1, Mode::Sampled { trials: 50, seed: Seed(1) }).unwrap().is_none());
        // Empty the pairs between the first half of a and first half of b.
        let mut bld = crate::graph::GraphBuilder::from_graph(&g);
        for u in 0..50 {
            for v in 100..150 {
                bld.remove_edge(u, v);
            }
        }
        let h = bld.build();
        let w = regularity_refute(&h, &a, &b, 0.1, Mode::Sampled { trials: 200, seed: Seed(2) }).unwrap();
        assert!(w.is_some());
    }
}
