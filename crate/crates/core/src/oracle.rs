//! Exact small-scale ground truth: triangle counts, maximum triangle
//! packings, maximum bipartite matchings and Hall violators.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexSet};

/// Pairwise vertex-disjoint triangles, each stored as `[u, v, w]` with
/// `u < v < w`. The host graph is supplied when validating.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrianglePacking {
    triples: Vec<[usize; 3]>,
}

impl TrianglePacking {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_triples(triples: impl IntoIterator<Item = [usize; 3]>) -> Self {
        let mut p = Self::new();
        for t in triples {
            p.push(t[0], t[1], t[2]);
        }
        p
    }

    pub fn push(&mut self, a: usize, b: usize, c: usize) {
        let mut t = [a, b, c];
        t.sort_unstable();
        self.triples.push(t);
    }

    pub fn extend(&mut self, other: &TrianglePacking) {
        self.triples.extend_from_slice(&other.triples);
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    pub fn truncate(&mut self, k: usize) {
        self.triples.truncate(k);
    }

    /// Vertices covered by the packing.
    pub fn vertices(&self, n: usize) -> VertexSet {
        let mut s = VertexSet::new(n);
        for t in &self.triples {
            for &v in t {
                if v < n {
                    s.insert(v);
                }
            }
        }
        s
    }

    pub fn validate(&self, host: &Graph) -> Result<()> {
        self.validate_layers(&[host])
    }

    /// Validates against the union of `layers` without materialising it.
    pub fn validate_layers(&self, layers: &[&Graph]) -> Result<()> {
        let n = layers.first().map_or(0, |g| g.n());
        if layers.iter().any(|g| g.n() != n) {
            return Err(invalid("validation layers have different vertex counts"));
        }
        self.validate_with(n, |u, v| layers.iter().any(|g| g.has_edge(u, v)))
    }

    /// Validates against an arbitrary adjacency predicate on `0..n`.
    pub fn validate_with(&self, n: usize, edge: impl Fn(usize, usize) -> bool) -> Result<()> {
        let mut seen = VertexSet::new(n);
        for t in &self.triples {
            let [a, b, c] = *t;
            if !(a < b && b < c) {
                return Err(Error::InvalidPacking(format!("triple {t:?} is not strictly increasing")));
            }
            if c >= n {
                return Err(Error::InvalidPacking(format!("triple {t:?} out of range for n = {n}")));
            }
            for v in [a, b, c] {
                if seen.contains(v) {
                    return Err(Error::InvalidPacking(format!("vertex {v} used twice")));
                }
                seen.insert(v);
            }
            if !(edge(a, b) && edge(a, c) && edge(b, c)) {
                return Err(Error::InvalidPacking(format!("triple {t:?} is not a triangle")));
            }
        }
        Ok(())
    }
}

/// Vertex-disjoint edges of a host graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self, n: usize) -> VertexSet {
        let mut s = VertexSet::new(n);
        for &(u, v) in &self.edges {
            s.insert(u);
            s.insert(v);
        }
        s
    }

    pub fn validate(&self, host: &Graph) -> Result<()> {
        let mut seen = VertexSet::new(host.n());
        for &(u, v) in &self.edges {
            if !host.has_edge(u, v) {
                return Err(Error::InvalidMatching(format!("({u}, {v}) is not an edge")));
            }
            for x in [u, v] {
                if seen.contains(x) {
                    return Err(Error::InvalidMatching(format!("vertex {x} matched twice")));
                }
                seen.insert(x);
            }
        }
        Ok(())
    }
}

/// All triangles with every vertex in `within` (or anywhere), ascending.
pub fn list_triangles(g: &Graph, within: Option<&VertexSet>) -> Vec<[usize; 3]> {
    let all = VertexSet::full(g.n());
    let s = within.unwrap_or(&all);
    let mut out = Vec::new();
    for u in s.iter() {
        let nu = g.neighbors_in(u, s);
        for v in nu.iter().filter(|&v| v > u) {
            let mut common = nu.clone();
            common.intersect_words(g.row(v));
            for w in common.iter().filter(|&w| w > v) {
                out.push([u, v, w]);
            }
        }
    }
    out
}

/// Exact number of triangles inside `within` (or in all of `g`).
pub fn count_triangles(g: &Graph, within: Option<&VertexSet>) -> usize {
    let all = VertexSet::full(g.n());
    let s = within.unwrap_or(&all);
    let mut count = 0;
    for u in s.iter() {
        let nu = g.neighbors_in(u, s);
        for v in nu.iter().filter(|&v| v > u) {
            let row = g.row(v);
            // only w > v
            let (wi, bit) = (v / 64, v % 64);
            let words = nu.words();
            let above = if bit == 63 { 0 } else { u64::MAX << (bit + 1) };
            count += (words[wi] & row[wi] & above).count_ones() as usize;
            count += crate::graph::and_count(&words[wi + 1..], &row[wi + 1..]);
        }
    }
    count
}

/// Outcome of the exact packing search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactResult {
    /// Provably maximum.
    Optimal(TrianglePacking),
    /// A packing of at least the requested budget; maximality not proven.
    Reached(TrianglePacking),
    /// Step limit exhausted before an answer was proven.
    Unknown,
}

impl ExactResult {
    pub fn packing(&self) -> Option<&TrianglePacking> {
        match self {
            ExactResult::Optimal(p) | ExactResult::Reached(p) => Some(p),
            ExactResult::Unknown => None,
        }
    }
}

/// Maximum triangle packing by memoised branch and bound (n ≤ 64).
///
/// With `budget`, the search stops once a packing of that size is found.
pub fn max_triangle_packing_exact(g: &Graph, budget: Option<usize>) -> Result<ExactResult> {
    max_triangle_packing_limited(g, budget, None)
}

/// As [`max_triangle_packing_exact`], returning [`ExactResult::Unknown`] after
/// `step_limit` search nodes.
pub fn max_triangle_packing_limited(
    g: &Graph,
    budget: Option<usize>,
    step_limit: Option<u64>,
) -> Result<ExactResult> {
    if g.n() > 64 {
        return Err(invalid(format!("exact packing supports n ≤ 64, got {}", g.n())));
    }
    let tris = list_triangles(g, None);
    let masks: Vec<u64> = tris.iter().map(|t| t.iter().fold(0u64, |m, &v| m | 1 << v)).collect();
    let mut by_vertex = vec![Vec::new(); g.n()];
    for (i, t) in tris.iter().enumerate() {
        for &v in t {
            by_vertex[v].push(i as u32);
        }
    }
    let mut search = Search { masks, by_vertex, memo: HashMap::new(), steps: 0, limit: step_limit };
    let root = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let root = search.live(root);
    let ub = root.count_ones() / 3;

    // Greedy incumbent: an instant answer when it meets the trivial bound or
    // the budget.
    let greedy = search.greedy(root);
    let cap = budget.map_or(u32::MAX, |b| b as u32);
    if greedy.len() as u32 == ub {
        return Ok(ExactResult::Optimal(search.to_packing(&tris, &greedy)));
    }
    if greedy.len() as u32 >= cap {
        return Ok(ExactResult::Reached(search.to_packing(&tris, &greedy)));
    }

    let Some(best) = search.solve(root, cap) else {
        return Ok(ExactResult::Unknown);
    };
    let chosen = search.reconstruct(root);
    debug_assert!(chosen.len() as u32 >= best.min(cap));
    let packing = search.to_packing(&tris, &chosen);
    if best >= cap && best < ub {
        Ok(ExactResult::Reached(packing))
    } else {
        Ok(ExactResult::Optimal(packing))
    }
}

#[derive(Clone, Copy)]
enum Choice {
    Tri(u32),
    Skip(u32),
}

#[derive(Clone, Copy)]
struct Entry {
    value: u32,
    exact: bool,
    choice: Choice,
}

struct Search {
    masks: Vec<u64>,
    by_vertex: Vec<Vec<u32>>,
    memo: HashMap<u64, Entry>,
    steps: u64,
    limit: Option<u64>,
}

impl Search {
    /// Vertices of `s` lying in some triangle inside `s`.
    fn live(&self, s: u64) -> u64 {
        self.masks.iter().filter(|&&m| m & s == m).fold(0, |acc, &m| acc | m)
    }

    fn greedy(&self, s: u64) -> Vec<u32> {
        let mut s = s;
        let mut out = Vec::new();
        while s != 0 {
            let Some(v) = self.branch_vertex(s) else { break };
            let t = self.by_vertex[v as usize].iter().copied().find(|&t| self.masks[t as usize] & s == self.masks[t as usize]);
            match t {
                Some(t) => {
                    out.push(t);
                    s = self.live(s & !self.masks[t as usize]);
                }
                None => s = self.live(s & !(1 << v)),
            }
        }
        out
    }

    /// Vertex of `s` in the fewest triangles inside `s`, lowest index on ties.
    fn branch_vertex(&self, s: u64) -> Option<u32> {
        let mut best: Option<(usize, u32)> = None;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            let c = self.by_vertex[v as usize].iter().filter(|&&t| self.masks[t as usize] & s == self.masks[t as usize]).count();
            if c > 0 && best.is_none_or(|(bc, _)| c < bc) {
                best = Some((c, v));
            }
        }
        best.map(|(_, v)| v)
    }

    /// Returns `f(s)` if it is below `cap`, otherwise some value ≥ `cap`.
    /// `None` when the step limit runs out.
    fn solve(&mut self, s: u64, cap: u32) -> Option<u32> {
        let s = self.live(s);
        if s == 0 || cap == 0 {
            return Some(0);
        }
        if let Some(e) = self.memo.get(&s) {
            if e.exact || e.value >= cap {
                return Some(e.value);
            }
        }
        self.steps += 1;
        if self.limit.is_some_and(|l| self.steps > l) {
            return None;
        }
        let ub = s.count_ones() / 3;
        let v = self.branch_vertex(s).expect("live set has a triangle");
        let mut best = 0;
        let mut choice = Choice::Skip(v);
        let tris: Vec<u32> = self.by_vertex[v as usize]
            .iter()
            .copied()
            .filter(|&t| self.masks[t as usize] & s == self.masks[t as usize])
            .collect();
        for t in tris {
            let val = 1 + self.solve(s & !self.masks[t as usize], cap - 1)?;
            if val > best {
                best = val;
                choice = Choice::Tri(t);
            }
            if best >= ub || best >= cap {
                break;
            }
        }
        if best < ub && best < cap {
            let val = self.solve(s & !(1 << v), cap)?;
            if val > best {
                best = val;
                choice = Choice::Skip(v);
            }
        }
        let exact = best < cap || best >= ub;
        self.memo.insert(s, Entry { value: best, exact, choice });
        Some(best)
    }

    fn reconstruct(&self, root: u64) -> Vec<u32> {
        let mut out = Vec::new();
        let mut s = self.live(root);
        while s != 0 {
            let Some(e) = self.memo.get(&s) else { break };
            match e.choice {
                Choice::Tri(t) => {
                    out.push(t);
                    s = self.live(s & !self.masks[t as usize]);
                }
                Choice::Skip(v) => s = self.live(s & !(1 << v)),
            }
        }
        out
    }

    fn to_packing(&self, tris: &[[usize; 3]], chosen: &[u32]) -> TrianglePacking {
        TrianglePacking::from_triples(chosen.iter().map(|&t| tris[t as usize]))
    }
}

const NONE: usize = usize::MAX;

/// Augmenting-path matcher between disjoint sides `a` and `b`.
struct Matcher<'g> {
    g: &'g Graph,
    b: &'g VertexSet,
    mate: Vec<usize>,
}

impl<'g> Matcher<'g> {
    fn new(g: &'g Graph, b: &'g VertexSet) -> Self {
        Self { g, b, mate: vec![NONE; g.n()] }
    }

    /// BFS for a shortest augmenting path from the free vertex `root`;
    /// neighbours are scanned in ascending order.
    fn augment(&mut self, root: usize) -> bool {
        let n = self.g.n();
        let mut visited = VertexSet::new(n);
        let mut via = vec![NONE; n];
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let mut cand = self.g.neighbors_in(x, self.b);
            cand.difference_with(&visited);
            for y in cand.iter() {
                visited.insert(y);
                via[y] = x;
                if self.mate[y] == NONE {
                    let mut y = y;
                    loop {
                        let x = via[y];
                        let next = self.mate[x];
                        self.mate[x] = y;
                        self.mate[y] = x;
                        if x == root {
                            return true;
                        }
                        y = next;
                    }
                }
                queue.push_back(self.mate[y]);
            }
        }
        false
    }

    fn matching(&self, a: &VertexSet) -> Matching {
        Matching { edges: a.iter().filter(|&x| self.mate[x] != NONE).map(|x| (x, self.mate[x])).collect() }
    }
}

fn check_sides(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<()> {
    if a.universe() != g.n() || b.universe() != g.n() {
        return Err(invalid("vertex set universe does not match graph"));
    }
    if !a.is_disjoint(b) {
        return Err(invalid("matching sides overlap"));
    }
    Ok(())
}

/// Maximum matching using only `a`–`b` edges of `g`.
pub fn max_bipartite_matching(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<Matching> {
    max_bipartite_matching_from(g, a, b, &Matching::default())
}

/// Maximum matching grown from a valid starting matching by augmenting paths.
pub fn max_bipartite_matching_from(g: &Graph, a: &VertexSet, b: &VertexSet, start: &Matching) -> Result<Matching> {
    check_sides(g, a, b)?;
    let mut m = Matcher::new(g, b);
    for &(x, y) in &start.edges {
        let (x, y) = if a.contains(x) { (x, y) } else { (y, x) };
        if !a.contains(x) || !b.contains(y) || !g.has_edge(x, y) || m.mate[x] != NONE || m.mate[y] != NONE {
            return Err(invalid(format!("starting matching edge ({x}, {y}) is not usable")));
        }
        m.mate[x] = y;
        m.mate[y] = x;
    }
    for x in a.iter() {
        if m.mate[x] == NONE {
            m.augment(x);
        }
    }
    Ok(m.matching(a))
}

/// A set `S ⊆ a` with `|N(S) ∩ b| < |S|`, or `None` when some matching
/// saturates `a`. Built from the alternating-reachability set of the free
/// `a`-vertices after a maximum matching.
pub fn hall_violator(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<Option<VertexSet>> {
    check_sides(g, a, b)?;
    let mut m = Matcher::new(g, b);
    for x in a.iter() {
        m.augment(x);
    }
    let free: Vec<usize> = a.iter().filter(|&x| m.mate[x] == NONE).collect();
    if free.is_empty() {
        return Ok(None);
    }
    let n = g.n();
    let mut reach_a = VertexSet::new(n);
    let mut reach_b = VertexSet::new(n);
    let mut queue: VecDeque<usize> = free.into_iter().collect();
    for &x in &queue {
        reach_a.insert(x);
    }
    while let Some(x) = queue.pop_front() {
        let mut cand = g.neighbors_in(x, b);
        cand.difference_with(&reach_b);
        for y in cand.iter() {
            reach_b.insert(y);
            let z = m.mate[y];
            debug_assert!(z != NONE, "free b-vertex reachable means augmenting path");
            if !reach_a.contains(z) {
                reach_a.insert(z);
                queue.push_back(z);
            }
        }
    }
    debug_assert!(neighbourhood_size(g, &reach_a, b) < reach_a.len());
    Ok(Some(reach_a))
}

/// |N(S) ∩ b|.
pub fn neighbourhood_size(g: &Graph, s: &VertexSet, b: &VertexSet) -> usize {
    let mut nb = VertexSet::new(g.n());
    for x in s.iter() {
        nb.union_with(&g.neighbors_in(x, b));
    }
    nb.len()
}
