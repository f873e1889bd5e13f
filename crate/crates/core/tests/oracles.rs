//! Implementations checked against brute force and frozen derived values.

mod common;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use tripack::experiments::{failure_certificate, sweep, Algorithm, ExperimentConfig, Model, Schedule, Target};
use tripack::generators::{complete_bipartite, gnp, random_bipartite};
use tripack::oracle::{hall_violator, max_bipartite_matching, max_triangle_packing_exact, ExactResult};
use tripack::packing::{
    build_h, greedy_triangle_packing, perturbed_pack, random_greedy_matching, solve_split, CherryParams,
};
use tripack::regularity::{regularity_refute, Mode};
use tripack::{Graph, Overlay, Seed, VertexSet};

use common::{brute_matching, naive_packing};

fn exact(g: &Graph) -> usize {
    match max_triangle_packing_exact(g, None).unwrap() {
        ExactResult::Optimal(p) => p.len(),
        other => panic!("{other:?}"),
    }
}

#[test]
fn c6_matching() {
    // 0-3-1-4-2-5-0 with sides {0,1,2}, {3,4,5}
    let g = Graph::from_edges(6, &[(0, 3), (3, 1), (1, 4), (4, 2), (2, 5), (5, 0)]).unwrap();
    let a = VertexSet::range(6, 0..3);
    let b = VertexSet::range(6, 3..6);
    assert_eq!(max_bipartite_matching(&g, &a, &b).unwrap().len(), 3);
    assert_eq!(brute_matching(&g, &[0, 1, 2], &[3, 4, 5]), 3);
}

#[test]
fn hall_violator_on_every_three_by_three_graph() {
    let a = VertexSet::range(6, 0..3);
    let b = VertexSet::range(6, 3..6);
    for mask in 0u32..512 {
        let edges: Vec<(usize, usize)> = (0..9).filter(|k| mask >> k & 1 == 1).map(|k| (k / 3, 3 + k % 3)).collect();
        let g = Graph::from_edges(6, &edges).unwrap();
        let size = brute_matching(&g, &[0, 1, 2], &[3, 4, 5]);
        assert_eq!(max_bipartite_matching(&g, &a, &b).unwrap().len(), size, "mask {mask:09b}");
        match hall_violator(&g, &a, &b).unwrap() {
            None => assert_eq!(size, 3, "mask {mask:09b}"),
            Some(s) => {
                assert!(size < 3, "mask {mask:09b}");
                assert!(s.is_subset(&a));
                let nb = (3..6).filter(|&y| s.iter().any(|x| g.has_edge(x, y))).count();
                assert!(nb < s.len(), "mask {mask:09b}");
            }
        }
    }
}

#[test]
fn koenig_deficiency_for_small_sides() {
    for seed in 0..400u64 {
        let na = 1 + (seed % 4) as usize;
        let nb = 1 + (seed / 4 % 4) as usize;
        let n = na + nb;
        let a = VertexSet::range(n, 0..na);
        let b = VertexSet::range(n, na..n);
        let g = random_bipartite(&a, &b, 0.2 + 0.15 * (seed % 5) as f64, Seed(seed)).unwrap();
        let deficiency = (0u32..1 << na)
            .map(|s| {
                let size = s.count_ones() as i64;
                let nbh = (na..n).filter(|&y| (0..na).any(|x| s >> x & 1 == 1 && g.has_edge(x, y))).count() as i64;
                size - nbh
            })
            .max()
            .unwrap();
        assert_eq!(max_bipartite_matching(&g, &a, &b).unwrap().len() as i64, na as i64 - deficiency, "seed {seed}");
    }
}

#[test]
fn exact_packing_matches_naive_enumeration() {
    for seed in 0..300u64 {
        let n = 3 + (seed % 10) as usize;
        let g = gnp(n, 0.3 + 0.1 * (seed % 6) as f64, Seed(seed)).unwrap();
        assert_eq!(exact(&g), naive_packing(&g), "seed {seed}");
    }
}

#[test]
fn pipelines_never_beat_the_exact_optimum() {
    for seed in 0..300u64 {
        let n = 9 + (seed % 4) as usize;
        let g = gnp(n, 0.4 + 0.1 * (seed % 5) as f64, Seed(seed)).unwrap();
        let p = 0.1 * (seed % 4) as f64;
        let out = perturbed_pack(&g, p, Seed(seed)).unwrap();
        let h = g.union(&out.overlay.root().graph()).unwrap();
        let best = exact(&h);
        assert!(out.len() <= best, "seed {seed}: {} > {best}", out.len());
        assert!(greedy_triangle_packing(&g, &VertexSet::full(n), usize::MAX).len() <= exact(&g));
    }
}

/// Brute force over every qualifying `(X, Y)`.
fn irregular_brute(g: &Graph, a: &[usize], b: &[usize], eps: f64) -> bool {
    let d = |xs: &[usize], ys: &[usize]| {
        let e = xs.iter().map(|&x| ys.iter().filter(|&&y| g.has_edge(x, y)).count()).sum::<usize>();
        e as f64 / (xs.len() * ys.len()) as f64
    };
    let total = d(a, b);
    let subsets = |s: &[usize]| -> Vec<Vec<usize>> {
        (1u32..1 << s.len())
            .map(|m| (0..s.len()).filter(|i| m >> i & 1 == 1).map(|i| s[i]).collect::<Vec<_>>())
            .filter(|x| x.len() as f64 + 1e-9 >= eps * s.len() as f64)
            .collect()
    };
    let ys = subsets(b);
    subsets(a).iter().any(|x| ys.iter().any(|y| (d(x, y) - total).abs() > eps + 1e-9))
}

#[test]
fn exhaustive_regularity_matches_brute_force() {
    for seed in 0..150u64 {
        let na = 2 + (seed % 4) as usize;
        let nb = 2 + (seed / 4 % 4) as usize;
        let n = na + nb;
        let av: Vec<usize> = (0..na).collect();
        let bv: Vec<usize> = (na..n).collect();
        let a = VertexSet::range(n, 0..na);
        let b = VertexSet::range(n, na..n);
        let g = random_bipartite(&a, &b, 0.5, Seed(seed)).unwrap();
        for eps in [0.2, 0.34, 0.5] {
            let got = regularity_refute(&g, &a, &b, eps, Mode::Exhaustive).unwrap();
            assert_eq!(got.is_some(), irregular_brute(&g, &av, &bv, eps), "seed {seed}, eps {eps}");
            if let Some(w) = got {
                assert!(w.x.is_subset(&a) && w.y.is_subset(&b));
            }
        }
    }
}

#[test]
fn first_greedy_edge_is_uniform() {
    let g = complete_bipartite(3, 6).unwrap();
    let mut counts = [0usize; 9];
    let trials = 9000;
    for s in 0..trials {
        let m = random_greedy_matching(&g, 1.0, 1, Seed(s)).unwrap();
        let (x, y) = m.edges[0];
        let (x, y) = (x.min(y), x.max(y));
        counts[3 * x + (y - 3)] += 1;
    }
    let expected = trials as f64 / 9.0;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let critical = ChiSquared::new(8.0).unwrap().inverse_cdf(0.999);
    assert!(stat < critical, "chi-square {stat:.2} ≥ {critical:.2}: {counts:?}");
}

#[test]
fn split_probabilities_solve_the_size_equations() {
    let prm = CherryParams::default();
    let c0 = 1.0 - (prm.delta0 + prm.delta) / 2.0;
    for c in [c0, 0.95, 0.99] {
        for i in 0..100 {
            let v = 400usize;
            let u = 300 + i;
            let (q1, q2) = solve_split(u, v, c).unwrap();
            let (uf, vf) = (u as f64, v as f64);
            let r1 = (q2 * uf - c * (1.0 - 2.0 * q1) * vf) / (q2 * uf);
            let r2 = (q1 * vf - c * (1.0 - 2.0 * q2) * uf) / (q1 * vf);
            assert!(r1.abs() < 1e-9 && r2.abs() < 1e-9, "u = {u}, c = {c}");
            for q in [q1, q2] {
                assert!(q > 1.0 / 7.0 && q < 3.0 / 7.0, "u = {u}, c = {c}: q = {q}");
            }
        }
    }
}

#[test]
fn h_matchings_give_valid_triangles() {
    for seed in 0..50u64 {
        let g = gnp(30, 0.5, Seed(seed)).unwrap();
        let u = VertexSet::range(30, 0..10);
        let w = VertexSet::range(30, 10..20);
        let v = VertexSet::range(30, 20..30);
        let m = max_bipartite_matching(&g, &u, &w).unwrap();
        let h = build_h(&g, &m, &v).unwrap();
        let hm = max_bipartite_matching(&h.graph, &h.left, &h.right).unwrap();
        let t = h.triangles(&hm);
        assert_eq!(t.len(), hm.len());
        t.validate(&g).unwrap();
    }
}

#[test]
fn certificate_never_contradicts_the_oracle() {
    let mut checked = 0;
    for (k, trials) in [(2usize, 70u64), (3, 70), (4, 60)] {
        let n = 3 * k;
        let g = complete_bipartite(k, n).unwrap();
        let a = VertexSet::range(n, 0..k);
        let b = a.complement();
        for s in 0..trials {
            let ov = Overlay::new(n, 0.1 + 0.8 * (s % 9) as f64 / 8.0, Seed(s)).unwrap();
            let w = failure_certificate(&g, &ov.graph_within(&b), &a, &b).unwrap();
            let h = g.union(&ov.graph()).unwrap();
            if exact(&h) == k {
                assert!(!w.certified, "k = {k}, seed {s}: {w:?}");
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 200);
}

#[test]
fn sweeps_are_reproducible() {
    let cfg = ExperimentConfig {
        model: Model::CompleteBipartite { alpha: 1.0 / 3.0 },
        n: vec![60],
        schedule: Schedule::LognOverN,
        c: vec![0.5, 4.0],
        trials: 8,
        base_seed: 11,
        algorithm: Algorithm::Perturbed,
        target: Target::MinDegree,
        beta: 0.05,
        output: None,
    };
    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    sweep(&cfg, Some(&p1)).unwrap();
    sweep(&cfg, Some(&p2)).unwrap();
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
}

#[test]
fn success_records_always_validate() {
    let cfg = ExperimentConfig {
        model: Model::Gnp { p: 0.4 },
        n: vec![30],
        schedule: Schedule::OneOverN,
        c: vec![3.0],
        trials: 10,
        base_seed: 0,
        algorithm: Algorithm::Perturbed,
        target: Target::MinDegree,
        beta: 0.05,
        output: None,
    };
    let rep = sweep(&cfg, None).unwrap();
    for r in &rep.records {
        assert!(r.error.is_none());
        let host = cfg.model.build(30, Seed(r.seed).derive_str("model")).unwrap();
        let out = perturbed_pack(&host.graph, r.point.p, Seed(r.seed).derive_str("overlay")).unwrap();
        assert_eq!(out.len(), r.size);
        out.validate(&host.graph).unwrap();
    }
}
