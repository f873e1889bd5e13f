//! Bitset graphs and vertex sets.

use std::fmt;

use crate::error::{invalid, Result};

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
pub(crate) fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

#[inline]
pub(crate) fn and3_count(a: &[u64], b: &[u64], c: &[u64]) -> usize {
    a.iter()
        .zip(b)
        .zip(c)
        .map(|((x, y), z)| (x & y & z).count_ones() as usize)
        .sum()
}

/// Iterator over set bits of a word slice, ascending.
#[derive(Clone)]
pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> Ones<'a> {
    pub(crate) fn new(words: &'a [u64]) -> Self {
        Self { words, idx: 0, cur: words.first().copied().unwrap_or(0) }
    }
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + t);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// A subset of `0..n` stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        Self { n, words: vec![0; words_for(n)] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::new(n);
        s.words.iter_mut().for_each(|w| *w = u64::MAX);
        s.trim();
        s
    }

    pub fn range(n: usize, r: std::ops::Range<usize>) -> Self {
        let mut s = Self::new(n);
        for v in r {
            s.insert(v);
        }
        s
    }

    /// Builds a set from vertex indices, rejecting anything `>= n`.
    pub fn from_vertices(n: usize, vs: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::new(n);
        for v in vs {
            if v >= n {
                return Err(invalid(format!("vertex {v} out of range for n = {n}")));
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub(crate) fn from_words(n: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(n));
        let mut s = Self { n, words };
        s.trim();
        s
    }

    fn trim(&mut self) {
        let r = self.n % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    /// Size of the universe, not of the set.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    /// Panics if `v` is outside the universe.
    #[inline]
    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "vertex {v} out of range for n = {}", self.n);
        self.words[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        if v < self.n {
            self.words[v / 64] &= !(1 << (v % 64));
        }
    }

    pub fn iter(&self) -> Ones<'_> {
        Ones::new(&self.words)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.same_universe(other);
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a |= b);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.same_universe(other);
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a &= b);
    }

    pub(crate) fn intersect_words(&mut self, other: &[u64]) {
        self.words.iter_mut().zip(other).for_each(|(a, b)| *a &= b);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.same_universe(other);
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a &= !b);
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> VertexSet {
        let mut s = self.clone();
        s.words.iter_mut().for_each(|w| *w = !*w);
        s.trim();
        s
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.same_universe(other);
        and_count(&self.words, &other.words)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.same_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.same_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// The `k` smallest members.
    pub fn take_lowest(&self, k: usize) -> VertexSet {
        let mut s = VertexSet::new(self.n);
        for v in self.iter().take(k) {
            s.insert(v);
        }
        s
    }

    fn same_universe(&self, other: &VertexSet) {
        assert_eq!(self.n, other.n, "vertex sets over different universes");
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Undirected simple graph on `0..n`, one adjacency bitset row per vertex.
/// Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        GraphBuilder::new(n).build()
    }

    pub fn complete(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        for u in 0..n {
            for v in u + 1..n {
                b.add(u, v);
            }
        }
        b.build()
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut b = GraphBuilder::new(n);
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Adjacency row of `v` as raw words.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.stride..(v + 1) * self.stride]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.row(u)[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> Ones<'_> {
        Ones::new(self.row(v))
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.row(v).to_vec())
    }

    /// |N(v) ∩ s|, checked.
    pub fn degree_into(&self, v: usize, s: &VertexSet) -> Result<usize> {
        if v >= self.n {
            return Err(invalid(format!("vertex {v} out of range for n = {}", self.n)));
        }
        if s.universe() != self.n {
            return Err(invalid("vertex set universe does not match graph"));
        }
        Ok(self.deg_in(v, s))
    }

    /// |N(v) ∩ s| without range checks.
    #[inline]
    pub fn deg_in(&self, v: usize, s: &VertexSet) -> usize {
        and_count(self.row(v), s.words())
    }

    /// |N(u) ∩ N(w) ∩ s|.
    #[inline]
    pub fn common_in(&self, u: usize, w: usize, s: &VertexSet) -> usize {
        and3_count(self.row(u), self.row(w), s.words())
    }

    /// N(v) ∩ s.
    pub fn neighbors_in(&self, v: usize, s: &VertexSet) -> VertexSet {
        let mut out = s.clone();
        out.intersect_words(self.row(v));
        out
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Minimum of `deg_in(v, s)` over `v ∈ s`; 0 for an empty set.
    pub fn min_degree_within(&self, s: &VertexSet) -> usize {
        s.iter().map(|v| self.deg_in(v, s)).min().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn union(&self, other: &Graph) -> Result<Graph> {
        if self.n != other.n {
            return Err(invalid(format!("union of graphs on {} and {} vertices", self.n, other.n)));
        }
        let rows: Vec<u64> = self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect();
        Ok(Graph::from_rows(self.n, rows))
    }

    /// Subgraph induced by `s`, relabelled to `0..|s|`, with the map back to
    /// original indices.
    pub fn induced(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        if s.universe() != self.n {
            return Err(invalid("vertex set universe does not match graph"));
        }
        let map = s.to_vec();
        let mut b = GraphBuilder::new(map.len());
        for (i, &u) in map.iter().enumerate() {
            for (j, &v) in map.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    b.add(i, j);
                }
            }
        }
        Ok((b.build(), map))
    }

    /// Graph with only the edges inside `s` kept; indices unchanged.
    pub fn restrict(&self, s: &VertexSet) -> Graph {
        let mut rows = vec![0u64; self.rows.len()];
        for v in s.iter() {
            let dst = &mut rows[v * self.stride..(v + 1) * self.stride];
            for ((d, a), b) in dst.iter_mut().zip(self.row(v)).zip(s.words()) {
                *d = a & b;
            }
        }
        Graph::from_rows(self.n, rows)
    }

    /// Graph with only the edges between `a` and `b` kept.
    pub fn restrict_between(&self, a: &VertexSet, b: &VertexSet) -> Graph {
        let mut rows = vec![0u64; self.rows.len()];
        for (src, dst_side) in [(a, b), (b, a)] {
            for v in src.iter() {
                let dst = &mut rows[v * self.stride..(v + 1) * self.stride];
                for ((d, x), y) in dst.iter_mut().zip(self.row(v)).zip(dst_side.words()) {
                    *d |= x & y;
                }
            }
        }
        Graph::from_rows(self.n, rows)
    }

    fn from_rows(n: usize, rows: Vec<u64>) -> Graph {
        let stride = words_for(n);
        let twice: usize = rows.iter().map(|w| w.count_ones() as usize).sum();
        let g = Graph { n, stride, rows, edge_count: twice / 2 };
        debug_assert!(g.is_symmetric_loopless());
        g
    }

    pub(crate) fn is_symmetric_loopless(&self) -> bool {
        (0..self.n).all(|u| !self.has_edge(u, u) && self.neighbors(u).all(|v| self.has_edge(v, u)))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edge_count)
    }
}

/// Mutable staging area for a [`Graph`].
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        let stride = words_for(n);
        Self { n, stride, rows: vec![0; n * stride] }
    }

    pub fn from_graph(g: &Graph) -> Self {
        Self { n: g.n, stride: g.stride, rows: g.rows.clone() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Adds `uv`, rejecting loops and out-of-range endpoints. Returns whether
    /// the edge was new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        if u >= self.n || v >= self.n {
            return Err(invalid(format!("edge ({u}, {v}) out of range for n = {}", self.n)));
        }
        if u == v {
            return Err(invalid(format!("self-loop at {u}")));
        }
        let new = !self.has(u, v);
        self.add(u, v);
        Ok(new)
    }

    #[inline]
    pub(crate) fn add(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.rows[u * self.stride + v / 64] |= 1 << (v % 64);
        self.rows[v * self.stride + u / 64] |= 1 << (u % 64);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u < self.n && v < self.n {
            self.rows[u * self.stride + v / 64] &= !(1 << (v % 64));
            self.rows[v * self.stride + u / 64] &= !(1 << (u % 64));
        }
    }

    #[inline]
    pub fn has(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.stride + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn build(self) -> Graph {
        Graph::from_rows(self.n, self.rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn degree_into_examples() {
        let k4 = Graph::complete(4);
        let s = VertexSet::from_vertices(4, [1, 2, 3]).unwrap();
        assert_eq!(k4.degree_into(0, &s).unwrap(), 3);
        assert_eq!(k4.degree_into(0, &VertexSet::new(4)).unwrap(), 0);
        assert!(k4.degree_into(4, &s).is_err());

        let k23 = path(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]);
        assert_eq!(k23.degree_into(0, &VertexSet::range(5, 2..5)).unwrap(), 3);
    }

    #[test]
    fn union_examples() {
        let g = path(4, &[(0, 1), (2, 3)]);
        assert_eq!(g.union(&Graph::empty(4)).unwrap(), g);
        assert_eq!(g.union(&g).unwrap(), g);
        let u = path(3, &[(0, 1)]).union(&path(3, &[(1, 2)])).unwrap();
        assert_eq!(u.edge_count(), 2);
        assert!(u.has_edge(0, 1) && u.has_edge(2, 1));
        assert!(g.union(&Graph::empty(5)).is_err());
    }

    #[test]
    fn induced_examples() {
        let k5 = Graph::complete(5);
        let (h, map) = k5.induced(&VertexSet::from_vertices(5, [0, 2, 4]).unwrap()).unwrap();
        assert_eq!(h, Graph::complete(3));
        assert_eq!(map, vec![0, 2, 4]);
        let (h, map) = k5.induced(&VertexSet::new(5)).unwrap();
        assert_eq!(h.n(), 0);
        assert!(map.is_empty());
    }

    #[test]
    fn builder_rejects_bad_edges() {
        let mut b = GraphBuilder::new(3);
        assert!(b.add_edge(0, 0).is_err());
        assert!(b.add_edge(0, 3).is_err());
        assert!(b.add_edge(0, 1).unwrap());
        assert!(!b.add_edge(1, 0).unwrap());
    }

    #[test]
    fn vertex_set_ops() {
        let a = VertexSet::from_vertices(130, [0, 64, 129]).unwrap();
        let b = VertexSet::range(130, 60..70);
        assert_eq!(a.intersection(&b).to_vec(), vec![64]);
        assert_eq!(a.union(&b).len(), 12);
        assert_eq!(a.complement().len(), 127);
        assert!(!a.contains(130));
        assert_eq!(VertexSet::full(130).len(), 130);
        assert_eq!(b.take_lowest(3).to_vec(), vec![60, 61, 62]);
    }

    #[test]
    fn restrict_keeps_only_inside_edges() {
        let k5 = Graph::complete(5);
        let s = VertexSet::from_vertices(5, [1, 2, 3]).unwrap();
        let r = k5.restrict(&s);
        assert_eq!(r.edge_count(), 3);
        let a = VertexSet::from_vertices(5, [0]).unwrap();
        let rb = k5.restrict_between(&a, &s);
        assert_eq!(rb.edge_count(), 3);
        assert!(rb.has_edge(2, 0));
    }
}
