mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use tripack::generators::{gnp, stable_model};
use tripack::io::{read_edge_list, write_edge_list};
use tripack::packing::{
    find_star_family, greedy_triangle_packing, max_cut_bipartition, perturbed_pack, random_greedy_matching_on,
};
use tripack::regularity::trim_super_regular;
use tripack::stability::find_stable_partition;
use tripack::{Graph, Overlay, Seed, VertexSet};

use common::{stable_by_definition, star_family_is_locally_optimal};

fn small_graph() -> impl Strategy<Value = Graph> {
    (1usize..40, 0.0f64..1.0, any::<u64>()).prop_map(|(n, p, s)| gnp(n, p, Seed(s)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vertex_set_algebra_matches_btreeset(
        n in 1usize..200,
        xs in proptest::collection::vec(any::<usize>(), 0..60),
        ys in proptest::collection::vec(any::<usize>(), 0..60),
    ) {
        let xs: BTreeSet<usize> = xs.into_iter().map(|x| x % n).collect();
        let ys: BTreeSet<usize> = ys.into_iter().map(|y| y % n).collect();
        let a = VertexSet::from_vertices(n, xs.iter().copied()).unwrap();
        let b = VertexSet::from_vertices(n, ys.iter().copied()).unwrap();
        prop_assert_eq!(a.union(&b).to_vec(), xs.union(&ys).copied().collect::<Vec<_>>());
        prop_assert_eq!(a.intersection(&b).to_vec(), xs.intersection(&ys).copied().collect::<Vec<_>>());
        prop_assert_eq!(a.difference(&b).to_vec(), xs.difference(&ys).copied().collect::<Vec<_>>());
        prop_assert_eq!(a.complement().len(), n - xs.len());
        prop_assert_eq!(a.is_disjoint(&b), xs.is_disjoint(&ys));
    }

    #[test]
    fn edge_list_round_trip(g in small_graph()) {
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        prop_assert_eq!(read_edge_list(buf.as_slice()).unwrap(), g);
    }

    #[test]
    fn split_rounds_partition_the_overlay(n in 2usize..40, p in 0.0f64..1.0, k in 1usize..5, s in any::<u64>()) {
        let ov = Overlay::new(n, p, Seed(s)).unwrap();
        let rounds = ov.split(k);
        for u in 0..n {
            for v in u + 1..n {
                let any = rounds.iter().any(|r| r.has_edge(u, v));
                prop_assert_eq!(any, ov.has_edge(u, v));
                prop_assert_eq!(ov.has_edge(u, v), ov.has_edge(v, u));
            }
        }
    }

    #[test]
    fn greedy_packings_are_valid_and_maximal(g in small_graph()) {
        let all = VertexSet::full(g.n());
        let t = greedy_triangle_packing(&g, &all, usize::MAX);
        t.validate(&g).unwrap();
        let rest = all.difference(&t.vertices(g.n()));
        prop_assert_eq!(tripack::oracle::count_triangles(&g, Some(&rest)), 0);
    }

    #[test]
    fn perturbed_outcomes_validate(g in small_graph(), p in 0.0f64..0.3, s in any::<u64>()) {
        let out = perturbed_pack(&g, p, Seed(s)).unwrap();
        out.validate(&g).unwrap();
        prop_assert!(out.len() <= g.n() / 3);
    }

    #[test]
    fn max_cut_is_locally_optimal(g in small_graph()) {
        let (x, y) = max_cut_bipartition(&g);
        prop_assert!(x.is_disjoint(&y));
        prop_assert_eq!(x.len() + y.len(), g.n());
        for v in 0..g.n() {
            let (own, other) = if x.contains(v) { (&x, &y) } else { (&y, &x) };
            prop_assert!(g.deg_in(v, own) <= g.deg_in(v, other), "moving {} grows the cut", v);
        }
    }

    #[test]
    fn random_greedy_matching_is_a_maximal_matching(g in small_graph(), s in any::<u64>()) {
        let m = random_greedy_matching_on(&g, usize::MAX, Seed(s));
        m.validate(&g).unwrap();
        let free = m.vertices(g.n()).complement();
        prop_assert!(free.iter().all(|v| g.deg_in(v, &free) == 0));
    }

    #[test]
    fn star_families_are_locally_optimal(n in 60usize..300, p in 0.03f64..0.2, s in any::<u64>()) {
        let g = gnp(n, p, Seed(s)).unwrap();
        let m = g.min_degree();
        prop_assume!(m >= 3 && m * m <= n);
        let fam = find_star_family(&g, m, 2.0 / m as f64, 1).unwrap();
        fam.validate(&g).unwrap();
        if let Err(e) = star_family_is_locally_optimal(&g, &fam) {
            return Err(TestCaseError::fail(e));
        }
    }

    #[test]
    fn trimming_removes_exactly_the_low_degree_vertices(
        n in 4usize..40, p in 0.0f64..1.0, s in any::<u64>(), eps in 0.01f64..0.3, d in 0.1f64..0.9,
    ) {
        let g = gnp(n, p, Seed(s)).unwrap();
        let a = VertexSet::range(n, 0..n / 2);
        let b = a.complement();
        let t = trim_super_regular(&g, &a, &b, eps, d).unwrap();
        let keep = |side: &VertexSet, other: &VertexSet| -> Vec<usize> {
            side.iter().filter(|&v| g.deg_in(v, other) as f64 >= (d - eps) * other.len() as f64).collect()
        };
        prop_assert_eq!(t.a.to_vec(), keep(&a, &b));
        prop_assert_eq!(t.b.to_vec(), keep(&b, &a));
        prop_assert_eq!(t.removed_a + t.a.len(), a.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stable_partitions_are_never_false_positives(
        n in 6usize..60, p in 0.0f64..1.0, alpha in 0.05f64..0.34, beta in 0.0f64..0.08, s in any::<u64>(),
    ) {
        let g = gnp(n, p, Seed(s)).unwrap();
        if let Some((a, b)) = find_stable_partition(&g, alpha, beta) {
            prop_assert_eq!(b, a.complement());
            prop_assert!(stable_by_definition(&g, &a, alpha, beta));
        }
    }

    #[test]
    fn planted_stable_models_are_found(n in 30usize..150, defect in 0.0f64..0.3, s in any::<u64>()) {
        let (alpha, beta) = (1.0 / 3.0, 0.05);
        let Ok((g, a, _)) = stable_model(n, alpha, beta, defect, Seed(s)) else {
            return Err(TestCaseError::reject("too many defects for βn"));
        };
        prop_assert!(stable_by_definition(&g, &a, alpha, beta));
        let (fa, _) = find_stable_partition(&g, alpha, beta).expect("planted partition");
        prop_assert!(stable_by_definition(&g, &fa, alpha, beta));
    }
}

#[test]
fn stable_search_agrees_with_exhaustive_search_on_tiny_graphs() {
    // One-sided: whenever the search claims a partition, some partition exists;
    // the count of misses is only reported.
    let (alpha, beta) = (1.0 / 3.0, 0.05);
    for s in 0..200u64 {
        let n = 6 + (s % 5) as usize;
        let g = gnp(n, 0.4 + 0.1 * (s % 6) as f64, Seed(s)).unwrap();
        let exists = (0u32..1 << n).any(|m| {
            let a = VertexSet::from_vertices(n, (0..n).filter(|v| m >> v & 1 == 1)).unwrap();
            stable_by_definition(&g, &a, alpha, beta)
        });
        if find_stable_partition(&g, alpha, beta).is_some() {
            assert!(exists, "seed {s}");
        }
    }
}
