use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tripack::experiments::{sweep, ExperimentConfig};
use tripack::generators::{complete_multipartite, gnp, k4_counterexample, k4_sides, random_bipartite, stable_model};
use tripack::io::{load_graph, load_packing, read_vertex_list, save_graph, save_packing, write_edge_list};
use tripack::oracle::{max_triangle_packing_exact, ExactResult};
use tripack::packing::{
    cherry_factor, extremal_pack, pair_factor, perturbed_pack, round_greedy_triangles, sublinear_pack, Cherry,
    CherryMode, CherryParams, PackOutcome,
};
use tripack::regularity::{is_super_regular, pair_stats, Mode, SuperRegularFailure};
use tripack::stability::{find_stable_partition, verify_stability};
use tripack::{Graph, Seed, VertexSet};

#[derive(Parser)]
#[command(name = "tripack", version, about = "Triangle packings in randomly perturbed graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a host graph as an edge list.
    Generate(GenerateArgs),
    #[command(subcommand)]
    Verify(Verify),
    /// Pack triangles in `g ∪ G(n, p)`.
    Pack(PackArgs),
    /// Run a sweep described by a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// CSV output; defaults to the config's `output`. A JSON mirror is
        /// written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Gnp,
    Bipartite,
    Multipartite,
    K4cx,
    Stable,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    n: Option<usize>,
    /// Edge probability (gnp, bipartite).
    #[arg(long)]
    p: Option<f64>,
    /// Size of the first side (bipartite).
    #[arg(long)]
    a_size: Option<usize>,
    /// Comma-separated part sizes (multipartite).
    #[arg(long, value_delimiter = ',')]
    parts: Vec<usize>,
    /// Block size (k4cx).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    beta: f64,
    /// Share of degraded A-vertices (stable).
    #[arg(long, default_value_t = 0.0)]
    defect: f64,
    /// Also write the planted side `A` as a vertex list.
    #[arg(long)]
    partition_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Verify {
    /// Exit 0 iff the packing is valid in the graph.
    Packing { graph: PathBuf, packing: PathBuf },
    /// Exact maximum packing size (small graphs).
    Factor {
        graph: PathBuf,
        /// Search step limit.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Density, ε-regularity and super-regularity of a pair.
    Regular {
        graph: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        d: f64,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Checks a given partition, or searches for one.
    Stable {
        graph: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        /// Side `A` as a vertex list file or range list.
        #[arg(long)]
        a_file: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Auto,
    Sublinear,
    Extremal,
    Roundgreedy,
    Cherry,
    Pair,
}

#[derive(Args)]
struct PackArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "auto")]
    algo: Algo,
    /// Packing output; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Writes `g ∪ G(n, p)` as used by the run, for `verify packing`.
    #[arg(long)]
    union_out: Option<PathBuf>,
    /// Target count (sublinear, roundgreedy); default `min(δ, ⌊n/3⌋)`.
    #[arg(long)]
    m: Option<usize>,
    /// Vertex sets as files or range lists such as `0..100,150`.
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    u: Option<String>,
    #[arg(long)]
    v: Option<String>,
    #[arg(long)]
    w: Option<String>,
    /// Defaults to `|A|/n` (extremal).
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    beta: f64,
    #[arg(long)]
    unbalanced: bool,
    /// Print the run diagnostics to stderr.
    #[arg(long)]
    verbose: bool,
}

/// A vertex list file, or ranges like `0..10,12,20..25`.
fn parse_vertices(spec: &str, n: usize) -> Result<VertexSet> {
    if Path::new(spec).is_file() {
        return Ok(read_vertex_list(File::open(spec)?, n)?);
    }
    let mut vs = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: usize = lo.parse().with_context(|| format!("bad range {part:?}"))?;
            let hi: usize = hi.parse().with_context(|| format!("bad range {part:?}"))?;
            vs.extend(lo..hi);
        } else {
            vs.push(part.parse().with_context(|| format!("bad vertex {part:?}"))?);
        }
    }
    Ok(VertexSet::from_vertices(n, vs)?)
}

fn need<T>(x: Option<T>, what: &str) -> Result<T> {
    x.with_context(|| format!("--{what} is required here"))
}

fn write_vertices(s: &VertexSet, path: &Path) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    let line: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    writeln!(f, "{}", line.join(" "))?;
    f.flush()?;
    Ok(())
}

fn generate(a: GenerateArgs) -> Result<()> {
    let seed = Seed(a.seed);
    let (g, part): (Graph, Option<VertexSet>) = match a.model {
        ModelKind::Gnp => (gnp(need(a.n, "n")?, need(a.p, "p")?, seed)?, None),
        ModelKind::Bipartite => {
            let n = need(a.n, "n")?;
            let k = need(a.a_size, "a-size")?;
            if k == 0 || k >= n {
                bail!("--a-size must lie in 1..n");
            }
            let side = VertexSet::range(n, 0..k);
            let g = random_bipartite(&side, &side.complement(), a.p.unwrap_or(1.0), seed)?;
            (g, Some(side))
        }
        ModelKind::Multipartite => {
            if a.parts.is_empty() {
                bail!("--parts is required for the multipartite model");
            }
            (complete_multipartite(&a.parts), None)
        }
        ModelKind::K4cx => {
            let (n, m) = (need(a.n, "n")?, need(a.m, "m")?);
            (k4_counterexample(n, m)?, Some(k4_sides(n, m)?.0))
        }
        ModelKind::Stable => {
            let (g, side, _) = stable_model(need(a.n, "n")?, need(a.alpha, "alpha")?, a.beta, a.defect, seed)?;
            (g, Some(side))
        }
    };
    save_graph(&g, &a.out)?;
    if let Some(path) = &a.partition_out {
        match &part {
            Some(s) => write_vertices(s, path)?,
            None => bail!("this model has no planted partition"),
        }
    }
    eprintln!("wrote n = {}, m = {}", g.n(), g.edge_count());
    Ok(())
}

fn verify(v: Verify) -> Result<ExitCode> {
    match v {
        Verify::Packing { graph, packing } => {
            let g = load_graph(graph)?;
            let p = load_packing(packing)?;
            match p.validate(&g) {
                Ok(()) => {
                    println!("valid: {} triangles", p.len());
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Verify::Factor { graph, budget } => {
            let g = load_graph(graph)?;
            match max_triangle_packing_exact(&g, budget)? {
                ExactResult::Optimal(p) => {
                    println!("maximum packing: {} (factor: {})", p.len(), 3 * p.len() == g.n());
                    Ok(ExitCode::SUCCESS)
                }
                ExactResult::Reached(p) => {
                    println!("at least {} (search stopped at the budget)", p.len());
                    Ok(ExitCode::SUCCESS)
                }
                ExactResult::Unknown => {
                    println!("unknown: step limit exhausted");
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Verify::Regular { graph, a, b, eps, d, exhaustive, trials, seed } => {
            let g = load_graph(graph)?;
            let (a, b) = (parse_vertices(&a, g.n())?, parse_vertices(&b, g.n())?);
            let mode = if exhaustive { Mode::Exhaustive } else { Mode::Sampled { trials, seed: Seed(seed) } };
            let st = pair_stats(&g, &a, &b, eps, mode)?;
            println!("density {:.4}, min degrees {} / {}", st.density, st.min_degree_a, st.min_degree_b);
            match &st.witness {
                Some(w) => println!("not {eps}-regular: sub-pair {}×{} has density {:.4}", w.x.len(), w.y.len(), w.density),
                None if exhaustive => println!("{eps}-regular"),
                None => println!("no irregular sub-pair found in {trials} samples"),
            }
            match is_super_regular(&g, &a, &b, eps, d, mode)? {
                Ok(()) => println!("super-regular check: no failure found"),
                Err(SuperRegularFailure::LowDegree { vertex, degree, required }) => {
                    println!("not super-regular: vertex {vertex} has degree {degree} < {required:.2}")
                }
                Err(SuperRegularFailure::SparseSubpair(w)) => {
                    println!("not super-regular: sub-pair density {:.4} below {d}", w.density)
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Verify::Stable { graph, alpha, beta, a_file } => {
            let g = load_graph(graph)?;
            let found = match a_file {
                Some(spec) => {
                    let a = parse_vertices(&spec, g.n())?;
                    let b = a.complement();
                    Some((a, b))
                }
                None => find_stable_partition(&g, alpha, beta),
            };
            let Some((a, b)) = found else {
                println!("no witness found");
                return Ok(ExitCode::FAILURE);
            };
            let report = verify_stability(&g, &a, &b, alpha, beta)?;
            println!("{report}");
            Ok(if report.holds { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn pack(a: PackArgs) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let n = g.n();
    let seed = Seed(a.seed);
    let m = a.m.unwrap_or(g.min_degree().min(n / 3));
    let set = |s: &Option<String>, what: &str| -> Result<VertexSet> { parse_vertices(need(s.as_deref(), what)?, n) };
    let out: PackOutcome = match a.algo {
        Algo::Auto => perturbed_pack(&g, a.p, seed)?,
        Algo::Sublinear => sublinear_pack(&g, m, a.p, seed)?,
        Algo::Roundgreedy => round_greedy_triangles(&g, m, a.p, seed)?,
        Algo::Extremal => {
            let side_a = set(&a.a, "a")?;
            let side_b = match &a.b {
                Some(s) => parse_vertices(s, n)?,
                None => side_a.complement(),
            };
            let alpha = a.alpha.unwrap_or(side_a.len() as f64 / n as f64);
            extremal_pack(&g, &side_a, &side_b, alpha, a.beta, a.p, seed)?
        }
        Algo::Cherry => {
            let c = Cherry::new(set(&a.u, "u")?, set(&a.v, "v")?, set(&a.w, "w")?)?;
            let mode = if a.unbalanced { CherryMode::Unbalanced } else { CherryMode::Balanced };
            cherry_factor(&g, &c, a.p, mode, &CherryParams::default(), seed)?
        }
        Algo::Pair => pair_factor(&g, &set(&a.u, "u")?, &set(&a.v, "v")?, a.p, seed)?,
    };
    out.validate(&g)?;
    if a.verbose {
        for r in &out.diagnostics.rounds {
            eprintln!("round {}: p = {:.6}", r.name, r.p);
        }
        for note in &out.diagnostics.notes {
            eprintln!("{note}");
        }
    }
    match &a.out {
        Some(path) => save_packing(&out.packing, path)?,
        None => tripack::io::write_packing(&out.packing, std::io::stdout().lock())?,
    }
    if let Some(path) = &a.union_out {
        let h = g.union(&out.overlay.root().graph())?;
        write_edge_list(&h, BufWriter::new(File::create(path)?))?;
    }
    eprintln!("{} triangles (target {m})", out.len());
    Ok(())
}

fn experiment(config: &Path, out: Option<PathBuf>) -> Result<ExitCode> {
    let cfg = ExperimentConfig::load(config).with_context(|| format!("loading {}", config.display()))?;
    let out = out.or_else(|| cfg.output.clone());
    let report = sweep(&cfg, out.as_deref())?;
    if out.is_none() {
        tripack::experiments::write_csv(&report.rows, std::io::stdout().lock())?;
    }
    let errors = report.errors();
    if errors > 0 {
        for r in report.records.iter().filter(|r| r.error.is_some()).take(5) {
            eprintln!("n = {}, C = {}, seed {}: {}", r.point.n, r.point.c, r.seed, r.error.as_deref().unwrap_or(""));
        }
        eprintln!("{errors} trials ended in an error");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn run() -> Result<ExitCode> {
    match Cli::parse().cmd {
        Cmd::Generate(a) => generate(a).map(|_| ExitCode::SUCCESS),
        Cmd::Verify(v) => verify(v),
        Cmd::Pack(a) => pack(a).map(|_| ExitCode::SUCCESS),
        Cmd::Experiment { config, out } => experiment(&config, out),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
