//! Lazily evaluated random overlays.
//!
//! An [`Overlay`] is a G(n, p) whose edge indicators are pure functions of
//! `(seed, u, v)`, so any subset of pairs can be queried without sampling the
//! rest. [`Overlay::split`] cuts an overlay into `k` rounds that are
//! independent G(n, q) with `1 − p = (1 − q)^k` and whose union is exactly the
//! parent; pipelines that reveal in rounds therefore never exceed the
//! caller's `p`, and different pipelines run with the same seed see the same
//! random graph.

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Result};
use crate::graph::{Graph, GraphBuilder, VertexSet};
use crate::rng::{mix64, Seed, SplitMix64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Level {
    k: u32,
    index: u32,
    /// Per-round probability at this level.
    q: f64,
    salt: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Overlay {
    n: usize,
    base_p: f64,
    seed: Seed,
    levels: Vec<Level>,
}

#[inline]
fn pair_key(u: usize, v: usize) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    ((a as u64) << 32) | b as u64
}

#[inline]
fn unit(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

impl Overlay {
    pub fn new(n: usize, p: f64, seed: Seed) -> Result<Self> {
        check_probability(p)?;
        Ok(Self { n, base_p: p, seed, levels: Vec::new() })
    }

    /// The overlay with no edges.
    pub fn empty(n: usize) -> Self {
        Self { n, base_p: 0.0, seed: Seed(0), levels: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    /// Marginal edge probability.
    pub fn p(&self) -> f64 {
        self.levels.last().map_or(self.base_p, |l| l.q)
    }

    /// Probability of the unsplit ancestor.
    pub fn root_p(&self) -> f64 {
        self.base_p
    }

    /// The unsplit ancestor.
    pub fn root(&self) -> Overlay {
        Overlay { levels: Vec::new(), ..self.clone() }
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == v || u >= self.n || v >= self.n || self.base_p <= 0.0 {
            return false;
        }
        let key = pair_key(u, v);
        if self.base_p < 1.0 && unit(mix64(self.seed.0 ^ mix64(key))) >= self.base_p {
            return false;
        }
        let mut parent_q = self.base_p;
        for l in &self.levels {
            if !member(l, parent_q, self.seed.0, key) {
                return false;
            }
            parent_q = l.q;
        }
        true
    }

    /// `k` rounds, independent G(n, q) each, with union equal to `self`.
    pub fn split(&self, k: usize) -> Vec<Overlay> {
        assert!(k >= 1, "split into zero rounds");
        if k == 1 {
            return vec![self.clone()];
        }
        let p = self.p();
        let q = if p >= 1.0 { 1.0 } else { 1.0 - (1.0 - p).powf(1.0 / k as f64) };
        let depth = self.levels.len() as u64;
        let parent_salt = self.levels.last().map_or(0x51_7cc1_b727_220a, |l| l.salt ^ u64::from(l.index));
        let salt = mix64(parent_salt ^ mix64(depth + 1));
        (0..k)
            .map(|i| {
                let mut levels = self.levels.clone();
                levels.push(Level { k: k as u32, index: i as u32, q, salt });
                Overlay { levels, ..self.clone() }
            })
            .collect()
    }

    /// Materialises every edge.
    pub fn graph(&self) -> Graph {
        self.graph_within(&VertexSet::full(self.n))
    }

    /// Materialises the edges with both ends in `s`.
    pub fn graph_within(&self, s: &VertexSet) -> Graph {
        let mut b = GraphBuilder::new(self.n);
        if self.base_p > 0.0 {
            let vs = s.to_vec();
            for (i, &u) in vs.iter().enumerate() {
                for &v in &vs[i + 1..] {
                    if self.has_edge(u, v) {
                        b.add(u, v);
                    }
                }
            }
        }
        b.build()
    }

    /// Materialises the edges between `a` and `b`.
    pub fn graph_between(&self, a: &VertexSet, b: &VertexSet) -> Graph {
        let mut g = GraphBuilder::new(self.n);
        if self.base_p > 0.0 {
            let bv = b.to_vec();
            for u in a.iter() {
                for &v in &bv {
                    if u != v && self.has_edge(u, v) {
                        g.add(u, v);
                    }
                }
            }
        }
        g.build()
    }

    /// Lowest `(x, y)`, `x < y`, both in `s`, joined in this overlay.
    pub fn find_edge_within(&self, s: &VertexSet) -> Option<(usize, usize)> {
        if self.base_p <= 0.0 {
            return None;
        }
        let vs = s.to_vec();
        for (i, &x) in vs.iter().enumerate() {
            for &y in &vs[i + 1..] {
                if self.has_edge(x, y) {
                    return Some((x, y));
                }
            }
        }
        None
    }
}

/// Whether a parent edge belongs to round `l.index` of `l.k`. The first round
/// containing the edge is drawn from its conditional law given that at least
/// one round does; later rounds join independently with probability `q`.
fn member(l: &Level, parent_q: f64, seed: u64, key: u64) -> bool {
    if l.q >= 1.0 {
        return true;
    }
    let mut rng = SplitMix64::new(mix64(seed ^ l.salt ^ mix64(key ^ l.salt.rotate_left(17))));
    let log1mq = (-l.q).ln_1p();
    let u = rng.next_f64();
    // P(J ≤ j) = (1 − (1−q)^{j+1}) / parent_q
    let first = ((-(u * parent_q)).ln_1p() / log1mq).floor();
    let first = if first.is_finite() { (first.max(0.0) as u32).min(l.k - 1) } else { l.k - 1 };
    if l.index < first {
        return false;
    }
    if l.index == first {
        return true;
    }
    for i in first + 1..=l.index {
        let hit = rng.next_f64() < l.q;
        if i == l.index {
            return hit;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        let z = Overlay::new(30, 0.0, Seed(1)).unwrap();
        assert_eq!(z.graph().edge_count(), 0);
        let f = Overlay::new(30, 1.0, Seed(1)).unwrap();
        assert_eq!(f.graph(), Graph::complete(30));
        for r in f.split(3) {
            assert_eq!(r.graph(), Graph::complete(30));
        }
        assert!(Overlay::new(3, 2.0, Seed(0)).is_err());
    }

    #[test]
    fn queries_are_order_independent() {
        let o = Overlay::new(100, 0.1, Seed(5)).unwrap();
        let g = o.graph();
        let s = VertexSet::range(100, 10..40);
        let h = o.graph_within(&s);
        assert!(h.edges().all(|(u, v)| g.has_edge(u, v)));
        assert_eq!(h, g.restrict(&s));
    }

    #[test]
    fn rounds_partition_the_parent() {
        let o = Overlay::new(200, 0.2, Seed(9)).unwrap();
        let parent = o.graph();
        let rounds: Vec<Graph> = o.split(3).iter().map(|r| r.graph()).collect();
        let mut union = Graph::empty(200);
        for r in &rounds {
            assert!(r.edges().all(|(u, v)| parent.has_edge(u, v)));
            union = union.union(r).unwrap();
        }
        assert_eq!(union, parent);
    }

    #[test]
    fn round_marginals_and_independence() {
        let p = 0.3;
        let o = Overlay::new(400, p, Seed(11)).unwrap();
        let rounds = o.split(2);
        let q = 1.0 - (1.0f64 - p).sqrt();
        let pairs = 400.0 * 399.0 / 2.0;
        let g0 = rounds[0].graph();
        let g1 = rounds[1].graph();
        for g in [&g0, &g1] {
            let sd = (pairs * q * (1.0 - q)).sqrt();
            assert!((g.edge_count() as f64 - pairs * q).abs() < 5.0 * sd);
        }
        let both = g0.edges().filter(|&(u, v)| g1.has_edge(u, v)).count() as f64;
        let sd = (pairs * q * q).sqrt();
        assert!((both - pairs * q * q).abs() < 5.0 * sd);
    }

    #[test]
    fn nested_split_stays_inside_parent() {
        let o = Overlay::new(120, 0.5, Seed(2)).unwrap();
        let r = &o.split(2)[1];
        let parent = r.graph();
        let kids: Vec<Graph> = r.split(2).iter().map(|k| k.graph()).collect();
        assert_eq!(kids[0].union(&kids[1]).unwrap(), parent);
        assert_ne!(kids[0], kids[1]);
    }
}
