mod support;

use hokt_core::evo::{
    crowding_distance, init_population, mutate, mutate_one_gene, run_nsga2, run_nsga2_observed,
    uniform_crossover, EvoConfig,
};
use hokt_core::metrics::{f1_score, honmi, modularity, nmi};
use hokt_core::transfer::{overlap_ratio, plan_transfer, similarity_matrix};
use hokt_core::{
    connected_components, DynamicNetwork, HoktConfig, ObjectiveVector, Partition, SnapshotGraph,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs = prop::collection::vec((0..n, 0..n), 0..3 * n);
        pairs.prop_map(move |raw| {
            let edges = raw.into_iter().filter(|(u, v)| u != v).collect();
            (n, edges)
        })
    })
}

fn labels_strategy(n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..k, n)
}

fn partition(labels: &[usize]) -> Partition {
    Partition::from_labels(labels.iter().map(|&l| Some(l)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degree_sum_is_twice_edge_count((n, edges) in graph_strategy(30)) {
        let g = SnapshotGraph::build(n, &edges).unwrap();
        let total: usize = (0..n).map(|v| g.degree(v)).sum();
        prop_assert_eq!(total, 2 * g.edge_count());
        for &(u, v) in g.edges() {
            prop_assert!(u < v);
            prop_assert!(g.neighbors(u).contains(&v) && g.neighbors(v).contains(&u));
        }
    }

    #[test]
    fn build_ignores_edge_order_and_orientation((n, edges) in graph_strategy(30), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut shuffled: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (v, u)).collect();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(SnapshotGraph::build(n, &edges).unwrap(), SnapshotGraph::build(n, &shuffled).unwrap());
    }

    #[test]
    fn components_match_bfs_and_survive_relabelling((n, edges) in graph_strategy(40), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let g = SnapshotGraph::build(n, &edges).unwrap();
        let p = connected_components(&g, None).unwrap();
        prop_assert_eq!(p.communities(), support::oracles::bfs_components(n, &edges));

        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let moved: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        let q = connected_components(&SnapshotGraph::build(n, &moved).unwrap(), None).unwrap();
        for u in 0..n {
            for v in 0..n {
                prop_assert_eq!(p.label(u) == p.label(v), q.label(perm[u]) == q.label(perm[v]));
            }
        }
    }

    #[test]
    fn modularity_bounds_and_oracle(
        (n, edges) in graph_strategy(25),
        labels in labels_strategy(25, 5),
    ) {
        prop_assume!(!edges.is_empty());
        let g = SnapshotGraph::build(n, &edges).unwrap();
        let labels = &labels[..n];
        let q = modularity(&g, &partition(labels)).unwrap();
        prop_assert!((-0.5..=1.0).contains(&q), "q = {q}");
        let want = support::oracles::modularity_direct(n, &edges, labels);
        prop_assert!((q - want).abs() < 1e-12);
        prop_assert!(modularity(&g, &Partition::single_community(&g)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn nmi_is_symmetric_bounded_and_label_free(
        a in labels_strategy(20, 4),
        b in labels_strategy(20, 4),
        shift in 1usize..50,
    ) {
        let nodes: Vec<usize> = (0..20).collect();
        let (pa, pb) = (partition(&a), partition(&b));
        let x = nmi(&pa, &pb, &nodes).unwrap();
        prop_assert!((0.0..=1.0).contains(&x));
        prop_assert!((x - nmi(&pb, &pa, &nodes).unwrap()).abs() < 1e-12);
        prop_assert!((nmi(&pa, &pa, &nodes).unwrap() - 1.0).abs() < 1e-12);
        let renamed: Vec<usize> = a.iter().map(|l| (l + shift) * 7).collect();
        prop_assert!((x - nmi(&partition(&renamed), &pb, &nodes).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn f1_is_label_free(a in labels_strategy(16, 4), b in labels_strategy(16, 4), shift in 1usize..9) {
        let nodes: Vec<usize> = (0..16).collect();
        let f = f1_score(&partition(&a), &partition(&b), &nodes).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        let renamed: Vec<usize> = b.iter().map(|l| 3 - l + shift * 10).collect();
        prop_assert_eq!(f, f1_score(&partition(&a), &partition(&renamed), &nodes).unwrap());
    }

    #[test]
    fn honmi_is_a_convex_combination(
        cur in labels_strategy(12, 3),
        h1 in labels_strategy(12, 3),
        h2 in labels_strategy(12, 3),
        w in 0.0f64..=1.0,
    ) {
        let nodes: Vec<usize> = (0..12).collect();
        let (c, p1, p2) = (partition(&cur), partition(&h1), partition(&h2));
        let got = honmi(&c, &[&p1, &p2], &[w, 1.0 - w], &[&nodes, &nodes]).unwrap();
        let want = w * nmi(&c, &p1, &nodes).unwrap() + (1.0 - w) * nmi(&c, &p2, &nodes).unwrap();
        prop_assert!((got - want).abs() < 1e-12);
        prop_assert_eq!(honmi(&c, &[&p1], &[1.0], &[&nodes]).unwrap(), nmi(&c, &p1, &nodes).unwrap());
    }

    #[test]
    fn operators_keep_genotypes_valid((n, edges) in graph_strategy(30), seed in any::<u64>(), p in 0.0f64..=1.0) {
        let g = SnapshotGraph::build(n, &edges).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = EvoConfig { pop_size: 6, ..EvoConfig::default() };
        let pop = init_population(&g, &cfg, &mut rng);
        prop_assert_eq!(pop.len(), 6);
        for pair in pop.chunks(2) {
            prop_assert!(pair[0].is_valid_for(&g));
            let child = uniform_crossover(&pair[0], &pair[1], &mut rng).unwrap();
            prop_assert!(child.is_valid_for(&g));
            prop_assert!(mutate(&child, &g, p, &mut rng).is_valid_for(&g));
            prop_assert!(mutate_one_gene(&child, &g, p, &mut rng).is_valid_for(&g));
        }
    }

    #[test]
    fn crowding_boundaries_are_infinite(pts in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..30)) {
        let objs: Vec<ObjectiveVector> = pts.iter().map(|&(a, b)| ObjectiveVector::new(a, b)).collect();
        let d = crowding_distance(&objs);
        prop_assert!(d.iter().all(|&x| x >= 0.0));
        let best_q = (0..objs.len()).max_by(|&a, &b| objs[a].q.total_cmp(&objs[b].q)).unwrap();
        let worst_q = (0..objs.len()).min_by(|&a, &b| objs[a].q.total_cmp(&objs[b].q)).unwrap();
        prop_assert!(d[best_q].is_infinite() || objs.iter().filter(|o| o.q == objs[best_q].q).count() > 1);
        prop_assert!(d[worst_q].is_infinite() || objs.iter().filter(|o| o.q == objs[worst_q].q).count() > 1);
    }

    #[test]
    fn similarity_diagonal_and_plan_weights((n, edges) in graph_strategy(15), cut in 0usize..10, sigma in 0.0f64..=1.0) {
        prop_assume!(edges.len() > 1);
        let g1 = SnapshotGraph::build(n, &edges).unwrap();
        let keep = 1 + cut % (edges.len() - 1);
        let g2 = SnapshotGraph::build(n, &edges[..keep]).unwrap();
        let g3 = SnapshotGraph::build(n, &edges[edges.len() - keep..]).unwrap();
        prop_assert_eq!(overlap_ratio(&g1, &g1).unwrap(), 1.0);
        let net = DynamicNetwork::new(vec![g1, g2, g3], None).unwrap();
        let sim = similarity_matrix(&net).unwrap();
        let cfg = HoktConfig { sigma, ..HoktConfig::default() };
        for t in 1..=3 {
            prop_assert_eq!(sim.get(t - 1, t - 1), 1.0);
            let plan = plan_transfer(t, &sim, &cfg).unwrap();
            prop_assert!(plan.order < t);
            prop_assert_eq!(plan.weights.len(), plan.order);
            if plan.order > 0 {
                prop_assert!((plan.weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
        }
    }
}

fn two_cliques() -> SnapshotGraph {
    let mut edges = Vec::new();
    for base in [0, 6] {
        for u in base..base + 6 {
            for v in u + 1..base + 6 {
                edges.push((u, v));
            }
        }
    }
    edges.push((0, 6));
    SnapshotGraph::build(12, &edges).unwrap()
}

#[test]
fn engine_is_deterministic_and_elitist() {
    let g = two_cliques();
    let cfg = EvoConfig {
        pop_size: 20,
        generations: 15,
        seed: 9,
        ..EvoConfig::default()
    };
    let eval = |p: &Partition| {
        Ok(ObjectiveVector::new(
            modularity(&g, p)?,
            p.community_count() as f64,
        ))
    };
    let a = run_nsga2(&g, eval, &cfg, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
    let b = run_nsga2(&g, eval, &cfg, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
    assert_eq!(a, b);
    assert!(a.iter().all(|i| i.rank == 0));

    let mut best = Vec::new();
    run_nsga2_observed(
        &g,
        eval,
        &cfg,
        &mut ChaCha8Rng::seed_from_u64(1),
        |gen, pop| {
            assert_eq!(pop.len(), 20, "generation {gen}");
            best.push(pop.iter().map(|i| i.objectives.q).fold(f64::MIN, f64::max));
        },
    )
    .unwrap();
    assert_eq!(best.len(), 16);
    assert!(best.windows(2).all(|w| w[1] >= w[0]), "{best:?}");
}
