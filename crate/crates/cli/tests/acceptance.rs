//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails. Pass criterion numbers as arguments to run a
//! subset.

#[path = "../../core/tests/support/oracles.rs"]
mod oracles;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use hokt_core::benchgen::{
    gen_events, gen_synfix, great_change_subsample, EventKind, EventSpec, SynfixSpec,
};
use hokt_core::evo::{
    crossover_with_mask, fast_nondominated_sort, random_genotype, EvoConfig, Genotype,
};
use hokt_core::metrics::{f1_score, honmi, modularity, nmi, rank_sum_test};
use hokt_core::transfer::{overlap_ratio, WeightPolicy};
use hokt_core::{
    baseline_mode, connected_components, run_hokt, DynamicNetwork, HoktConfig, Mode,
    ObjectiveVector, Partition, SnapshotGraph,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (usize, &'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn labelled(labels: &[usize]) -> Partition {
    Partition::from_labels(labels.iter().map(|&l| Some(l)).collect())
}

fn oracle_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures = Vec::new();

    for i in 0..200 {
        let n = rng.gen_range(1..=50);
        let edges = oracles::random_edges(n, rng.gen_range(0.02..0.2), &mut rng);
        let g = SnapshotGraph::build(n, &edges).unwrap();
        let links = random_genotype(&g, &mut rng).links(&g);
        let decoded = connected_components(&g, Some(&links)).unwrap();
        let proper: Vec<(usize, usize)> = links.iter().copied().filter(|(u, v)| u != v).collect();
        if decoded.communities() != oracles::bfs_components(n, &proper) {
            failures.push(format!("decode graph {i}"));
        }

        if !edges.is_empty() {
            let k = rng.gen_range(1..=n.min(6));
            let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
            let q = modularity(&g, &labelled(&labels)).unwrap();
            if (q - oracles::modularity_direct(n, &edges, &labels)).abs() > 1e-12 {
                failures.push(format!("modularity graph {i}"));
            }
        }
    }

    for i in 0..100 {
        let p = rng.gen_range(1..=100);
        let pts: Vec<(f64, f64)> = (0..p)
            .map(|_| (rng.gen_range(0..10) as f64, rng.gen_range(0..10) as f64))
            .collect();
        let objs: Vec<ObjectiveVector> = pts
            .iter()
            .map(|&(a, b)| ObjectiveVector::new(a, b))
            .collect();
        let mut got = fast_nondominated_sort(&objs);
        let mut want = oracles::peel_fronts(&pts);
        got.iter_mut().for_each(|f| f.sort_unstable());
        want.iter_mut().for_each(|f| f.sort_unstable());
        if got != want {
            failures.push(format!("sort set {i}"));
        }
    }

    for i in 0..200 {
        let n = rng.gen_range(1..=20);
        let a: Vec<usize> = (0..n).map(|_| rng.gen_range(0..4)).collect();
        let b: Vec<usize> = (0..n).map(|_| rng.gen_range(0..4)).collect();
        let nodes: Vec<usize> = (0..n).collect();
        let got = nmi(&labelled(&a), &labelled(&b), &nodes).unwrap();
        if (got - oracles::nmi_brute(&a, &b).clamp(0.0, 1.0)).abs() > 1e-12 {
            failures.push(format!("nmi pair {i}"));
        }
        let got = f1_score(&labelled(&a), &labelled(&b), &nodes).unwrap();
        if (got - oracles::f1_pairs(&a, &b)).abs() > 1e-12 {
            failures.push(format!("f1 pair {i}"));
        }
    }

    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let shift = rng.gen_range(0.0..1.5);
        let a: Vec<f64> = (0..5).map(|_| rng.gen_range(0.0..1.0)).collect();
        let b: Vec<f64> = (0..5).map(|_| rng.gen_range(0.0..1.0) + shift).collect();
        let got = rank_sum_test(&a, &b).unwrap().p_value;
        worst = worst.max((got - oracles::rank_sum_exact(&a, &b)).abs());
    }
    if worst > 0.02 {
        failures.push(format!("rank-sum deviation {worst:.4}"));
    }

    let secs = start.elapsed().as_secs_f64();
    check(
        failures.is_empty() && secs < 60.0,
        format!(
            "mismatches {:?}, worst rank-sum gap {worst:.4}, {secs:.1}s",
            failures
        ),
    )
}

fn golden_examples() -> Outcome {
    let prev = SnapshotGraph::build(5, &[(0, 1), (0, 2), (0, 3), (2, 3)]).unwrap();
    let cur = SnapshotGraph::build(5, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (3, 4)]).unwrap();
    let r = overlap_ratio(&cur, &prev).unwrap();

    let g = SnapshotGraph::build(8, &[]).unwrap();
    let links: Vec<(usize, usize)> = [(1, 2), (2, 8), (3, 4), (4, 7), (5, 6), (6, 3)]
        .iter()
        .map(|&(a, b)| (a - 1, b - 1))
        .collect();
    let comps: Vec<Vec<usize>> = connected_components(&g, Some(&links))
        .unwrap()
        .communities()
        .into_iter()
        .map(|c| c.into_iter().map(|v| v + 1).collect())
        .collect();

    let p1 = Genotype {
        genes: vec![2, 3, 4, 7],
    };
    let p2 = Genotype {
        genes: vec![5, 1, 6, 0],
    };
    let child = crossover_with_mask(&p1, &p2, &[true, false, true, false]).unwrap();

    let a = labelled(&[0, 0, 1, 1, 1, 2]);
    let b = labelled(&[0, 1, 1, 1, 2, 2]);
    let nodes: Vec<usize> = (0..6).collect();
    let h = honmi(&a, &[&b], &[1.0], &[&nodes]).unwrap();
    let direct = nmi(&a, &b, &nodes).unwrap();

    let ok = r == 0.5
        && comps == vec![vec![1, 2, 8], vec![3, 4, 5, 6, 7]]
        && child.genes[0] == 5
        && child.genes[1] == 3
        && h.to_bits() == direct.to_bits();
    check(
        ok,
        format!(
            "overlap {r}, components {comps:?}, offspring ({}, {}), weighted {h} vs nmi {direct}",
            child.genes[0], child.genes[1]
        ),
    )
}

fn synfix(seed: u64) -> DynamicNetwork {
    gen_synfix(&SynfixSpec {
        seed,
        ..SynfixSpec::default()
    })
    .unwrap()
}

fn mean_nmi(nets: &[DynamicNetwork], cfg: &HoktConfig, mode: Mode) -> Vec<f64> {
    let mut sums: Vec<f64> = Vec::new();
    for (seed, net) in nets.iter().enumerate() {
        let cfg = HoktConfig {
            evo: EvoConfig {
                seed: seed as u64,
                ..cfg.evo.clone()
            },
            ..cfg.clone()
        };
        let res = baseline_mode(net, &cfg, mode).unwrap();
        sums.resize(res.len(), 0.0);
        for (s, r) in sums.iter_mut().zip(&res) {
            *s += r.nmi_vs_truth.unwrap();
        }
    }
    sums.iter().map(|s| s / nets.len() as f64).collect()
}

fn fmt(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.4}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn synfix_minor_change() -> Outcome {
    let nets: Vec<DynamicNetwork> = (0..10).map(synfix).collect();
    let means = mean_nmi(&nets, &HoktConfig::default(), Mode::Hokt);
    let later = &means[1..];
    let avg = later.iter().sum::<f64>() / later.len() as f64;
    let min = later.iter().copied().fold(f64::MAX, f64::min);
    check(
        min >= 0.95 && avg >= 0.97,
        format!(
            "mean NMI per step {}; min over t=2..10 {min:.4}, average {avg:.4}",
            fmt(&means)
        ),
    )
}

/// Fixed transfer weights keyed by subsampled timestep (original steps 3, 5,
/// 7, 9).
fn fixed_weights() -> WeightPolicy {
    WeightPolicy::FixedSchedule(
        [
            (2, vec![1.0]),
            (3, vec![0.9, 0.1]),
            (4, vec![0.7, 0.3]),
            (5, vec![0.7, 0.3]),
        ]
        .into_iter()
        .collect(),
    )
}

fn great_change_comparison() -> Outcome {
    let nets: Vec<DynamicNetwork> = (0..10)
        .map(|s| great_change_subsample(&synfix(s), 2).unwrap())
        .collect();
    let cfg = HoktConfig {
        weight_policy: fixed_weights(),
        ..HoktConfig::default()
    };
    let hokt = mean_nmi(&nets, &cfg, Mode::Hokt);
    let first = mean_nmi(&nets, &cfg, Mode::FirstOrder);
    // original steps 5, 7, 9
    let idx = [2, 3, 4];
    let within = idx.iter().all(|&i| hokt[i] >= first[i] - 0.005);
    let ahead = idx.iter().filter(|&&i| hokt[i] > first[i]).count();
    check(
        within && ahead >= 2,
        format!(
            "hokt {} | first_order {} | ahead at {ahead}/3 of steps 5,7,9",
            fmt(&hokt),
            fmt(&first)
        ),
    )
}

fn zero_threshold_equivalence() -> Outcome {
    let quick = |seed| HoktConfig {
        sigma: 0.0,
        evo: EvoConfig {
            pop_size: 30,
            generations: 15,
            seed,
            ..EvoConfig::default()
        },
        ..HoktConfig::default()
    };
    let mut nets: Vec<DynamicNetwork> = (0..3)
        .map(|s| great_change_subsample(&synfix(s), 2).unwrap())
        .collect();
    for kind in EventKind::ALL {
        nets.push(
            gen_events(&EventSpec {
                kind,
                nodes: 200,
                timesteps: 4,
                seed: 5,
                ..EventSpec::default()
            })
            .unwrap(),
        );
    }
    let mut mismatched = 0;
    for (i, net) in nets.iter().enumerate() {
        let cfg = quick(i as u64 + 11);
        let a = format!("{:?}", run_hokt(net, &cfg).unwrap());
        let b = format!("{:?}", baseline_mode(net, &cfg, Mode::FirstOrder).unwrap());
        if a != b {
            mismatched += 1;
        }
    }
    check(
        mismatched == 0,
        format!("{mismatched} of {} networks differ", nets.len()),
    )
}

fn hokt_bin(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hokt"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(String::from_utf8_lossy(&out.stderr).trim().to_string())
    }
}

const COMPARED: [&str; 4] = [
    "results.csv",
    "summary.json",
    "node_map.csv",
    "similarity.csv",
];

fn cli_determinism() -> Outcome {
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = root.path();
    hokt_bin(&[
        "generate",
        "events",
        "--kind",
        "merge_split",
        "--timesteps",
        "3",
        "--seed",
        "4",
        "--out",
        &root.join("events").to_string_lossy(),
    ])?;
    let configs = [
        (
            "synfix.toml",
            "[dataset]\nkind = \"synfix\"\n[dataset.synfix]\ntimesteps = 4\nseed = 1\n\
             [experiment]\nruns = 3\n[evo]\npop_size = 20\ngenerations = 8\n",
            vec![],
        ),
        (
            "stride.toml",
            "[dataset]\nkind = \"synfix\"\nstride = 2\n[dataset.synfix]\ntimesteps = 7\n\
             [experiment]\nalgorithms = [\"hokt\", \"first_order\", \"static\"]\nruns = 5\nworkers = 3\n\
             [evo]\npop_size = 16\ngenerations = 6\n",
            vec!["--weights", "2=1;3=0.6,0.4;4=0.5,0.3,0.2"],
        ),
        (
            "events.toml",
            "[dataset]\nkind = \"dir\"\npath = \"events\"\n[experiment]\nruns = 2\nworkers = 2\n\
             [hokt]\nsigma = 0.95\n[evo]\npop_size = 12\ngenerations = 4\n",
            vec!["--seed", "7", "--order", "2"],
        ),
    ];
    let mut differing = Vec::new();
    for (name, body, extra) in &configs {
        let cfg = root.join(name);
        std::fs::write(&cfg, body).map_err(|e| e.to_string())?;
        let outs: Vec<_> = ["a", "b"]
            .iter()
            .map(|s| root.join(format!("{name}.{s}")))
            .collect();
        for out in &outs {
            let mut args = vec!["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
            args.extend(extra.iter().copied());
            hokt_bin(&args)?;
        }
        for file in COMPARED {
            if read(&outs[0].join(file))? != read(&outs[1].join(file))? {
                differing.push(format!("{name}/{file}"));
            }
        }
    }
    check(
        differing.is_empty(),
        format!("{} configs, differing files {differing:?}", configs.len()),
    )
}

fn read(path: &Path) -> Result<Vec<u8>, String> {
    std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn generator_statistics() -> Outcome {
    let mut problems = Vec::new();
    let mut degree_range = (f64::MAX, f64::MIN);
    for kind in EventKind::ALL {
        for seed in 0..20 {
            let net = gen_events(&EventSpec {
                kind,
                timesteps: 1,
                seed,
                ..EventSpec::default()
            })
            .unwrap();
            let g = net.snapshot(1);
            let mean = 2.0 * g.edge_count() as f64 / g.node_count() as f64;
            degree_range = (degree_range.0.min(mean), degree_range.1.max(mean));
            if !(14.0..=16.0).contains(&mean) || g.node_count() != 1000 {
                problems.push(format!(
                    "{kind:?} seed {seed}: {} nodes, degree {mean:.2}",
                    g.node_count()
                ));
            }
        }
    }
    for seed in 0..20 {
        let net = synfix(seed);
        let truth = net.truth().unwrap();
        for (t, (g, p)) in net.snapshots().iter().zip(truth).enumerate() {
            if g.node_count() != 128 || p.community_count() != 4 {
                problems.push(format!("synfix seed {seed} t{}", t + 1));
            }
        }
        for (t, w) in truth.windows(2).enumerate() {
            let changed = (0..128).filter(|&v| w[0].label(v) != w[1].label(v)).count();
            if changed != 12 {
                problems.push(format!(
                    "synfix seed {seed}: {changed} moves into t{}",
                    t + 2
                ));
            }
        }
    }
    check(
        problems.is_empty(),
        format!(
            "events mean degree at t=1 in [{:.2}, {:.2}]; problems {problems:?}",
            degree_range.0, degree_range.1
        ),
    )
}

fn main() {
    let wanted: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let criteria: [Criterion; 7] = [
        (1, "oracle equivalence", oracle_suite),
        (2, "golden examples", golden_examples),
        (3, "SYNFIX minor changes", synfix_minor_change),
        (4, "great-change comparison", great_change_comparison),
        (
            5,
            "zero threshold equals first order",
            zero_threshold_equivalence,
        ),
        (6, "run determinism", cli_determinism),
        (7, "generator statistics", generator_statistics),
    ];
    let mut failed = 0;
    for (n, name, f) in criteria {
        if !wanted.is_empty() && !wanted.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {n} ({name}, {secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {n} ({name}, {secs:.1}s): {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
