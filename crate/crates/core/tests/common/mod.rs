//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use tripack::packing::StarFamily;
use tripack::{Graph, VertexSet};

/// Brute-force maximum triangle packing on at most 16 vertices: the lowest
/// free vertex is either left out or covered by some triangle through it.
pub fn naive_packing(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 16);
    let adj: Vec<u16> = (0..n).map(|u| (0..n).filter(|&v| g.has_edge(u, v)).fold(0u16, |m, v| m | 1 << v)).collect();
    fn go(adj: &[u16], free: u16) -> usize {
        if free == 0 {
            return 0;
        }
        let v = free.trailing_zeros() as usize;
        let rest = free & !(1 << v);
        let mut best = go(adj, rest);
        let nb = adj[v] & rest;
        for x in 0..adj.len() {
            if nb >> x & 1 == 0 {
                continue;
            }
            let common = nb & adj[x] & !((1u16 << (x + 1)) - 1);
            for y in 0..adj.len() {
                if common >> y & 1 == 1 {
                    best = best.max(1 + go(adj, rest & !(1 << x) & !(1 << y)));
                }
            }
        }
        best
    }
    go(&adj, ((1u32 << n) - 1) as u16)
}

/// Independent check that no local move applies and the bounds hold.
pub fn star_family_is_locally_optimal(g: &Graph, fam: &StarFamily) -> Result<(), String> {
    let n = g.n();
    let lo = (fam.min_leaves - 1e-9).ceil() as usize;
    let cap = fam.max_leaves;
    let mut owner = vec![None; n];
    for (i, k) in fam.stars.iter().enumerate() {
        if k.leaves.len() < lo || k.leaves.len() > cap {
            return Err(format!("star {i} has {} leaves", k.leaves.len()));
        }
        for &x in std::iter::once(&k.center).chain(&k.leaves) {
            if owner[x].replace(i).is_some() {
                return Err(format!("vertex {x} used twice"));
            }
        }
        if k.leaves.iter().any(|&l| !g.has_edge(k.center, l)) {
            return Err(format!("star {i} has a non-adjacent leaf"));
        }
    }
    let free_nbrs = |v: usize| g.neighbors(v).filter(|&x| owner[x].is_none()).count();
    for (v, o) in owner.iter().enumerate() {
        if o.is_none() && free_nbrs(v) >= lo {
            return Err(format!("free vertex {v} could start a star"));
        }
    }
    for k in &fam.stars {
        if k.leaves.len() < cap && free_nbrs(k.center) > 0 {
            return Err(format!("star at {} could grow", k.center));
        }
        let gk = k.leaves.len();
        for &l in &k.leaves {
            let kk = free_nbrs(l).min(cap);
            if kk < lo {
                continue;
            }
            let rest = if gk > lo { (gk - 1) * (gk - 1) } else { 0 };
            if kk * kk + rest > gk * gk {
                return Err(format!("leaf {l} could become a better centre"));
            }
        }
    }
    Ok(())
}

/// Stability straight from the definition: side sizes within `βn` of
/// `αn` and `(1 − α)n`, cut minimum degree at least `αn/4`, at most `βn`
/// vertices per side missing more than `βn` of the other side, `A ≠ ∅`.
pub fn stable_by_definition(g: &Graph, a: &VertexSet, alpha: f64, beta: f64) -> bool {
    let n = g.n();
    let nf = n as f64;
    let in_a: Vec<bool> = (0..n).map(|v| a.contains(v)).collect();
    let na = in_a.iter().filter(|&&x| x).count();
    let nb = n - na;
    let tol = 1e-9;
    if (na as f64 - alpha * nf).abs() > beta * nf + tol || (nb as f64 - (1.0 - alpha) * nf).abs() > beta * nf + tol {
        return false;
    }
    if alpha > 0.0 && na == 0 {
        return false;
    }
    let cross = |v: usize| (0..n).filter(|&u| in_a[u] != in_a[v] && g.has_edge(u, v)).count();
    if (0..n).any(|v| (cross(v) as f64) + tol < alpha * nf / 4.0) {
        return false;
    }
    let bad_a = (0..n).filter(|&v| in_a[v] && (cross(v) as f64) + tol < nb as f64 - beta * nf).count();
    let bad_b = (0..n).filter(|&v| !in_a[v] && (cross(v) as f64) + tol < na as f64 - beta * nf).count();
    bad_a as f64 <= beta * nf + tol && bad_b as f64 <= beta * nf + tol
}

/// Maximum matching between `a` and `b` by trying every injection; sides of
/// at most 6 vertices.
pub fn brute_matching(g: &Graph, a: &[usize], b: &[usize]) -> usize {
    fn go(g: &Graph, a: &[usize], b: &[usize], used: u32) -> usize {
        let Some((&x, rest)) = a.split_first() else { return 0 };
        let mut best = go(g, rest, b, used);
        for (j, &y) in b.iter().enumerate() {
            if used >> j & 1 == 0 && g.has_edge(x, y) {
                best = best.max(1 + go(g, rest, b, used | 1 << j));
            }
        }
        best
    }
    go(g, a, b, 0)
}
