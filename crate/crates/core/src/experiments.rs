//! Monte Carlo trials, threshold sweeps and failure certificates.
//!
//! Sweep CSV columns, in order: `C, n, trials, successes, success_rate,
//! mean_size`. The JSON mirror holds the rows and every trial record.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, same_universe, Result};
use crate::generators::{
    ceil_tol, complete_bipartite, disjoint_complete_bipartite, edge_subsample, gnp, k4_counterexample, k4_sides,
    regular_bipartite, stable_model,
};
use crate::graph::{Graph, VertexSet};
use crate::oracle::{count_triangles, max_bipartite_matching};
use crate::overlay::Overlay;
use crate::packing::{
    extremal_pack, greedy_triangle_packing, perturbed_pack, round_greedy_triangles, sublinear_pack, PackOutcome,
};
use crate::rng::Seed;

/// Environment variable holding the number of worker threads.
pub const WORKERS_ENV: &str = "TRIPACK_WORKERS";

/// Host graph family; `n` comes from the sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    Complete,
    /// `K_{⌈αn⌉, n−⌈αn⌉}`, smaller side first.
    CompleteBipartite { alpha: f64 },
    /// See [`stable_model`].
    Stable { alpha: f64, beta: f64, defect_fraction: f64 },
    Gnp { p: f64 },
    /// `n / (2·side)` disjoint copies of `K_{side,side}`.
    DisjointBipartite { side: usize },
    K4Counterexample { m: usize },
}

/// A host graph, with its planted partition when the model has one.
#[derive(Clone, Debug)]
pub struct Host {
    pub graph: Graph,
    pub partition: Option<(VertexSet, VertexSet)>,
    pub alpha: Option<f64>,
}

impl Model {
    pub fn build(&self, n: usize, seed: Seed) -> Result<Host> {
        let plain = |graph| Host { graph, partition: None, alpha: None };
        Ok(match *self {
            Model::Complete => plain(Graph::complete(n)),
            Model::CompleteBipartite { alpha } => {
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(invalid(format!("alpha = {alpha} outside (0, 1)")));
                }
                let k = ceil_tol(alpha * n as f64);
                if k == 0 || k >= n {
                    return Err(invalid(format!("⌈αn⌉ = {k} leaves an empty side for n = {n}")));
                }
                let a = VertexSet::range(n, 0..k);
                let b = a.complement();
                Host { graph: complete_bipartite(k, n)?, partition: Some((a, b)), alpha: Some(alpha) }
            }
            Model::Stable { alpha, beta, defect_fraction } => {
                let (graph, a, b) = stable_model(n, alpha, beta, defect_fraction, seed)?;
                Host { graph, partition: Some((a, b)), alpha: Some(alpha) }
            }
            Model::Gnp { p } => plain(gnp(n, p, seed)?),
            Model::DisjointBipartite { side } => {
                if side == 0 || !n.is_multiple_of(2 * side) {
                    return Err(invalid(format!("n = {n} is not a multiple of 2·side = {}", 2 * side)));
                }
                plain(disjoint_complete_bipartite(n / (2 * side), side))
            }
            Model::K4Counterexample { m } => {
                let (a, b) = k4_sides(n, m)?;
                Host { graph: k4_counterexample(n, m)?, partition: Some((a, b)), alpha: None }
            }
        })
    }
}

/// How `C` becomes an edge probability; the result is capped at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    LognOverN,
    OneOverN,
    Fixed,
}

impl Schedule {
    pub fn probability(self, c: f64, n: usize) -> f64 {
        let nf = n.max(2) as f64;
        let p = match self {
            Schedule::LognOverN => c * nf.ln() / nf,
            Schedule::OneOverN => c / nf,
            Schedule::Fixed => c,
        };
        p.clamp(0.0, 1.0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// The top-level solver.
    #[default]
    Perturbed,
    /// Needs a model with a planted stable partition.
    Extremal,
    Sublinear,
    RoundGreedy,
    /// Greedy triangles in `g ∪ G(n, p)`.
    Greedy,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// `min(δ, ⌊n/3⌋)`.
    #[default]
    MinDegree,
    /// `⌊n/3⌋`.
    Factor,
    Fixed(usize),
}

impl Target {
    pub fn resolve(self, g: &Graph) -> usize {
        match self {
            Target::MinDegree => g.min_degree().min(g.n() / 3),
            Target::Factor => g.n() / 3,
            Target::Fixed(k) => k,
        }
    }
}

fn default_beta() -> f64 {
    0.05
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: Model,
    pub n: Vec<usize>,
    pub schedule: Schedule,
    #[serde(rename = "C")]
    pub c: Vec<f64>,
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub algorithm: Algorithm,
    #[serde(default)]
    pub target: Target,
    /// Stability parameter handed to the extremal pipeline.
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if self.n.is_empty() || self.c.is_empty() {
            return Err(invalid("need at least one n and one C"));
        }
        if let Some(c) = self.c.iter().find(|c| !(**c >= 0.0 && c.is_finite())) {
            return Err(invalid(format!("C = {c} must be a finite non-negative number")));
        }
        if self.schedule == Schedule::Fixed && self.c.iter().any(|&c| c > 1.0) {
            return Err(invalid("with the fixed schedule every C is a probability"));
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let cfg: Self = serde_json::from_reader(File::open(path)?)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// One sweep point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub n: usize,
    #[serde(rename = "C")]
    pub c: f64,
    pub p: f64,
}

/// Isolated-in-B count against triangles inside B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureWitness {
    pub isolated: usize,
    pub triangles_in_b: usize,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub point: Point,
    pub seed: u64,
    pub size: usize,
    pub target: usize,
    pub success: bool,
    pub witness: Option<FailureWitness>,
    pub error: Option<String>,
    pub duration_ms: f64,
}

/// In the complete bipartite host with independent sides and `|b| = 2|a|`,
/// every triangle with at most one vertex in `b` must be balanced by one
/// inside `b`, and each vertex of `b` without an overlay neighbour in `b` lies
/// in such a triangle. So `I > T_B` rules out a triangle factor.
pub fn failure_certificate(g: &Graph, overlay: &Graph, a: &VertexSet, b: &VertexSet) -> Result<FailureWitness> {
    let n = g.n();
    if overlay.n() != n {
        return Err(invalid(format!("overlay on {} vertices, host on {n}", overlay.n())));
    }
    same_universe(n, &[a, b])?;
    if !a.is_disjoint(b) {
        return Err(invalid("a and b must be disjoint"));
    }
    if b.len() != 2 * a.len() {
        return Err(invalid(format!("need |b| = 2|a|, got |a| = {}, |b| = {}", a.len(), b.len())));
    }
    for (name, s) in [("a", a), ("b", b)] {
        if let Some(v) = s.iter().find(|&v| g.deg_in(v, s) > 0) {
            return Err(invalid(format!("{name} is not independent in g (vertex {v})")));
        }
    }
    if let Some(v) = a.iter().find(|&v| g.deg_in(v, b) != b.len()) {
        return Err(invalid(format!("vertex {v} of a misses part of b")));
    }
    let isolated = b.iter().filter(|&v| overlay.deg_in(v, b) == 0).count();
    let triangles_in_b = count_triangles(overlay, Some(b));
    Ok(FailureWitness { isolated, triangles_in_b, certified: isolated > triangles_in_b })
}

fn certificate_for(host: &Host, overlay: &Overlay) -> Option<FailureWitness> {
    let (a, b) = host.partition.as_ref()?;
    if b.len() != 2 * a.len() {
        return None;
    }
    failure_certificate(&host.graph, &overlay.graph_within(b), a, b).ok()
}

fn pack(cfg: &ExperimentConfig, host: &Host, p: f64, target: usize, seed: Seed) -> Result<PackOutcome> {
    let g = &host.graph;
    match cfg.algorithm {
        Algorithm::Perturbed => perturbed_pack(g, p, seed),
        Algorithm::Extremal => {
            let (Some((a, b)), Some(alpha)) = (&host.partition, host.alpha) else {
                return Err(invalid("the extremal algorithm needs a model with a stable partition"));
            };
            extremal_pack(g, a, b, alpha, cfg.beta, p, seed)
        }
        Algorithm::Sublinear => sublinear_pack(g, target, p, seed),
        Algorithm::RoundGreedy => round_greedy_triangles(g, target, p, seed),
        Algorithm::Greedy => {
            let overlay = Overlay::new(g.n(), p, seed)?;
            let all = VertexSet::full(g.n());
            let h = g.union(&overlay.graph())?;
            let packing = greedy_triangle_packing(&h, &all, target);
            Ok(PackOutcome { packing, overlay, diagnostics: Default::default() })
        }
    }
}

fn attempt(cfg: &ExperimentConfig, point: Point, seed: Seed) -> Result<(usize, usize, Option<FailureWitness>)> {
    let host = cfg.model.build(point.n, seed.derive_str("model"))?;
    let target = cfg.target.resolve(&host.graph);
    let out = pack(cfg, &host, point.p, target, seed.derive_str("overlay"))?;
    out.validate(&host.graph)?;
    let witness = certificate_for(&host, &out.overlay.root());
    Ok((out.len(), target, witness))
}

/// Runs one trial. Failures to generate or validate become error records.
pub fn run_trial(cfg: &ExperimentConfig, point: Point, seed: u64) -> TrialRecord {
    let start = Instant::now();
    let res = attempt(cfg, point, Seed(seed));
    let duration_ms = start.elapsed().as_secs_f64() * 1e3;
    match res {
        Ok((size, target, witness)) => {
            TrialRecord { point, seed, size, target, success: size >= target, witness, error: None, duration_ms }
        }
        Err(e) => TrialRecord {
            point,
            seed,
            size: 0,
            target: 0,
            success: false,
            witness: None,
            error: Some(e.to_string()),
            duration_ms,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "C")]
    pub c: f64,
    pub n: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_size: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: ExperimentConfig,
    pub rows: Vec<SweepRow>,
    pub records: Vec<TrialRecord>,
}

impl SweepReport {
    pub fn errors(&self) -> usize {
        self.records.iter().filter(|r| r.error.is_some()).count()
    }
}

/// Worker pool sized by [`WORKERS_ENV`] when set.
pub fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let k: usize = v.trim().parse().map_err(|_| invalid(format!("{WORKERS_ENV} = {v:?} is not a count")))?;
        b = b.num_threads(k);
    }
    b.build().map_err(|e| invalid(format!("thread pool: {e}")))
}

fn points(cfg: &ExperimentConfig) -> Vec<Point> {
    let mut ns = cfg.n.clone();
    ns.sort_unstable();
    ns.dedup();
    let mut cs = cfg.c.clone();
    cs.sort_by(f64::total_cmp);
    cs.dedup();
    ns.iter()
        .flat_map(|&n| cs.iter().map(move |&c| Point { n, c, p: cfg.schedule.probability(c, n) }))
        .collect()
}

fn aggregate(point: Point, recs: &[TrialRecord]) -> SweepRow {
    let trials = recs.len();
    let successes = recs.iter().filter(|r| r.success).count();
    let total: usize = recs.iter().map(|r| r.size).sum();
    SweepRow {
        c: point.c,
        n: point.n,
        trials,
        successes,
        success_rate: successes as f64 / trials as f64,
        mean_size: total as f64 / trials as f64,
    }
}

/// All `(n, C)` points in order, trials in parallel. Trial `i` uses seed
/// `base_seed + i`. Each CSV row is flushed once its point finishes, and the
/// JSON mirror goes next to it with extension `.json`.
pub fn sweep(cfg: &ExperimentConfig, csv_out: Option<&Path>) -> Result<SweepReport> {
    cfg.validate()?;
    let pool = worker_pool()?;
    let mut writer = match csv_out {
        Some(path) => Some(csv::Writer::from_writer(BufWriter::new(File::create(path)?))),
        None => None,
    };
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for point in points(cfg) {
        let recs: Vec<TrialRecord> = pool.install(|| {
            (0..cfg.trials)
                .into_par_iter()
                .map(|i| run_trial(cfg, point, cfg.base_seed.wrapping_add(i as u64)))
                .collect()
        });
        let row = aggregate(point, &recs);
        if let Some(w) = writer.as_mut() {
            w.serialize(&row)?;
            w.flush()?;
        }
        rows.push(row);
        records.extend(recs);
    }
    let report = SweepReport { config: cfg.clone(), rows, records };
    if let Some(path) = csv_out {
        let mut f = BufWriter::new(File::create(path.with_extension("json"))?);
        serde_json::to_writer_pretty(&mut f, &report)?;
        f.flush()?;
    }
    Ok(report)
}

/// Number of `K4`s with every vertex in `within`.
pub fn count_k4(g: &Graph, within: &VertexSet) -> usize {
    let mut count = 0;
    for u in within.iter() {
        let nu = g.neighbors_in(u, within);
        for v in nu.iter().filter(|&v| v > u) {
            let nuv = g.neighbors_in(v, &nu);
            for w in nuv.iter().filter(|&w| w > v) {
                count += g.neighbors_in(w, &nuv).iter().filter(|&x| x > w).count();
            }
        }
    }
    count
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct K4Summary {
    pub n: usize,
    pub m: usize,
    pub p: f64,
    /// `K4` count inside `B` per trial.
    pub counts: Vec<usize>,
    pub below: usize,
    pub fraction_below: f64,
}

/// Copies of `K4` inside `B` of the counterexample host plus `G(n, p)`;
/// trial `i` uses `seed + i`.
pub fn k4_deficit_experiment(n: usize, m: usize, p: f64, trials: usize, seed: u64) -> Result<K4Summary> {
    let g = k4_counterexample(n, m)?;
    let (_, b) = k4_sides(n, m)?;
    let inner = g.restrict(&b);
    let counts = (0..trials)
        .into_par_iter()
        .map(|i| {
            let ov = Overlay::new(n, p, Seed(seed.wrapping_add(i as u64)))?;
            Ok(count_k4(&inner.union(&ov.graph_within(&b))?, &b))
        })
        .collect::<Result<Vec<_>>>()?;
    let below = counts.iter().filter(|&&c| c < m).count();
    let fraction_below = if trials == 0 { 0.0 } else { below as f64 / trials as f64 };
    Ok(K4Summary { n, m, p, counts, below, fraction_below })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchingRow {
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "N")]
    pub side: usize,
    pub trials: usize,
    pub perfect: usize,
    pub rate: f64,
}

/// Perfect-matching rate of a `⌈delta_frac·N⌉`-regular bipartite graph with
/// each edge kept with probability `C·ln N / N`.
pub fn matching_threshold_experiment(
    side: usize,
    delta_frac: f64,
    c_list: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<MatchingRow>> {
    if !(delta_frac > 0.5 && delta_frac <= 1.0) {
        return Err(invalid(format!("delta_frac = {delta_frac} outside (1/2, 1]")));
    }
    let deg = ceil_tol(delta_frac * side as f64);
    c_list
        .iter()
        .map(|&c| {
            let p = Schedule::LognOverN.probability(c, side);
            let perfect = (0..trials)
                .into_par_iter()
                .map(|i| {
                    let s = Seed(seed.wrapping_add(i as u64));
                    let (g, a, b) = regular_bipartite(side, deg, s.derive_str("host"))?;
                    let kept = edge_subsample(&g, p, s.derive_str("keep"))?;
                    Ok(max_bipartite_matching(&kept, &a, &b)?.len() == side)
                })
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .filter(|&ok| ok)
                .count();
            let rate = if trials == 0 { 0.0 } else { perfect as f64 / trials as f64 };
            Ok(MatchingRow { c, side, trials, perfect, rate })
        })
        .collect()
}

pub fn write_csv<T: Serialize>(rows: &[T], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}
