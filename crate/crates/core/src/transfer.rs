//! Knowledge transfer across snapshots.
//!
//! At every timestep after the first, the overlap ratio between the current
//! snapshot and its predecessor decides how much history the smoothness
//! objective draws on. A high ratio (`r >= sigma`) keeps the classic
//! first-order scheme: smoothness is the NMI against the previous step's
//! chosen partition. A low ratio signals a large structural change, so the
//! smoothness objective becomes a weighted sum of NMIs against several past
//! partitions instead, which damps negative transfer from an outlying
//! predecessor.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HoktError, Result};
use crate::evo::{pick_solution, run_nsga2, EvoConfig};
use crate::graph::{shared_nodes, DynamicNetwork, NodeId, Partition, SnapshotGraph};
use crate::metrics::{f1_score, honmi, modularity, nmi, validate_weights, ObjectiveVector};

/// How many past partitions feed the smoothness objective, and their
/// weights (most recent first).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferPlan {
    pub order: usize,
    pub weights: Vec<f64>,
}

impl TransferPlan {
    pub fn none() -> Self {
        TransferPlan {
            order: 0,
            weights: Vec::new(),
        }
    }

    pub fn first_order() -> Self {
        TransferPlan {
            order: 1,
            weights: vec![1.0],
        }
    }
}

/// Pairwise overlap ratios; entry `(i, j)` (0-based) is the overlap of
/// snapshot `j` taken as current against snapshot `i` taken as previous.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    size: usize,
    values: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(HoktError::input("similarity matrix must be square"));
        }
        let values: Vec<f64> = rows.into_iter().flatten().collect();
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(HoktError::input("overlap ratios must lie in [0, 1]"));
        }
        Ok(SimilarityMatrix { size, values })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.size + j]
    }

    /// Overlap of 1-based timestep `current` against 1-based `previous`.
    pub fn ratio(&self, previous: usize, current: usize) -> f64 {
        self.get(previous - 1, current - 1)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.size)
    }

    /// Difference between the overlap of step `t` with `t-1` and with `t-2`.
    ///
    /// A magnitude above about 0.01 marks an abrupt change at `t`. Reported
    /// as a diagnostic only; it does not influence planning.
    pub fn adjacent_gap(&self, t: usize) -> Option<f64> {
        (t >= 3 && t <= self.size).then(|| self.ratio(t - 1, t) - self.ratio(t - 2, t))
    }
}

/// How weights are chosen when the overlap falls below `sigma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightPolicy {
    /// Explicit weights per 1-based timestep, most recent first.
    FixedSchedule(BTreeMap<usize, Vec<f64>>),
    /// Weights proportional to the overlap of the current snapshot with each
    /// of the `max_order` most recent ones.
    SimilarityProportional { max_order: usize },
}

impl Default for WeightPolicy {
    fn default() -> Self {
        WeightPolicy::SimilarityProportional { max_order: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoktConfig {
    pub evo: EvoConfig,
    pub sigma: f64,
    pub weight_policy: WeightPolicy,
}

impl Default for HoktConfig {
    fn default() -> Self {
        HoktConfig {
            evo: EvoConfig::default(),
            sigma: 0.8,
            weight_policy: WeightPolicy::default(),
        }
    }
}

impl HoktConfig {
    pub fn validate(&self) -> Result<()> {
        self.evo.validate()?;
        if !(0.0..=1.0).contains(&self.sigma) {
            return Err(HoktError::config(format!(
                "sigma {} is outside [0, 1]",
                self.sigma
            )));
        }
        match &self.weight_policy {
            WeightPolicy::SimilarityProportional { max_order } if *max_order == 0 => {
                Err(HoktError::config("max_order must be at least 1"))
            }
            WeightPolicy::FixedSchedule(schedule) => {
                for (t, w) in schedule {
                    validate_weights(w)
                        .map_err(|e| HoktError::config(format!("weights for timestep {t}: {e}")))?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Outcome of one timestep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimestepResult {
    /// 1-based timestep.
    pub t: usize,
    pub partition: Partition,
    pub q: f64,
    pub honmi: f64,
    pub nmi_vs_truth: Option<f64>,
    pub f1_vs_truth: Option<f64>,
    pub plan: TransferPlan,
    /// Overlap ratio with the previous snapshot (`None` at `t = 1`).
    pub overlap_prev: Option<f64>,
}

/// Which history a run may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Overlap-driven first- or higher-order transfer.
    Hokt,
    /// Always first-order transfer after the first step.
    FirstOrder,
    /// Every snapshot optimised on modularity alone.
    Static,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Hokt => "hokt",
            Mode::FirstOrder => "first_order",
            Mode::Static => "static",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "hokt" => Ok(Mode::Hokt),
            "first_order" => Ok(Mode::FirstOrder),
            "static" => Ok(Mode::Static),
            other => Err(HoktError::config(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Fraction of the current snapshot's edges that also appear in `previous`.
pub fn overlap_ratio(current: &SnapshotGraph, previous: &SnapshotGraph) -> Result<f64> {
    if current.edge_count() == 0 {
        return Err(HoktError::UndefinedMetric(
            "overlap ratio is undefined for a snapshot without edges".into(),
        ));
    }
    let shared = current
        .edges()
        .iter()
        .filter(|&&(u, v)| previous.has_edge(u, v))
        .count();
    Ok(shared as f64 / current.edge_count() as f64)
}

pub fn similarity_matrix(net: &DynamicNetwork) -> Result<SimilarityMatrix> {
    let size = net.len();
    let mut values = vec![0.0; size * size];
    for i in 0..size {
        for j in 0..size {
            values[i * size + j] = if i == j {
                // still reject edgeless snapshots on the diagonal
                overlap_ratio(&net.snapshots()[j], &net.snapshots()[i])?;
                1.0
            } else {
                overlap_ratio(&net.snapshots()[j], &net.snapshots()[i])?
            };
        }
    }
    Ok(SimilarityMatrix { size, values })
}

/// Choose the transfer order and weights for 1-based timestep `t`.
pub fn plan_transfer(t: usize, sim: &SimilarityMatrix, cfg: &HoktConfig) -> Result<TransferPlan> {
    if t == 0 || t > sim.size() {
        return Err(HoktError::input(format!(
            "timestep {t} outside 1..={}",
            sim.size()
        )));
    }
    if t == 1 {
        return Ok(TransferPlan::none());
    }
    if sim.ratio(t - 1, t) >= cfg.sigma {
        return Ok(TransferPlan::first_order());
    }
    match &cfg.weight_policy {
        WeightPolicy::SimilarityProportional { max_order } => {
            let order = (*max_order).min(t - 1);
            let ratios: Vec<f64> = (1..=order).map(|j| sim.ratio(t - j, t)).collect();
            let total: f64 = ratios.iter().sum();
            let weights = if total > 0.0 {
                ratios.iter().map(|r| r / total).collect()
            } else {
                vec![1.0 / order as f64; order]
            };
            Ok(TransferPlan { order, weights })
        }
        WeightPolicy::FixedSchedule(schedule) => {
            let weights = schedule.get(&t).ok_or_else(|| {
                HoktError::config(format!("weight schedule has no entry for timestep {t}"))
            })?;
            validate_weights(weights)?;
            if weights.len() > t - 1 {
                return Err(HoktError::config(format!(
                    "timestep {t} has only {} past snapshots but {} weights",
                    t - 1,
                    weights.len()
                )));
            }
            Ok(TransferPlan {
                order: weights.len(),
                weights: weights.clone(),
            })
        }
    }
}

/// Run the overlap-driven transfer scheme over every snapshot.
pub fn run_hokt(net: &DynamicNetwork, cfg: &HoktConfig) -> Result<Vec<TimestepResult>> {
    run_mode(net, cfg, Mode::Hokt)
}

/// Run a comparison mode: first-order transfer only, or no transfer at all.
pub fn baseline_mode(
    net: &DynamicNetwork,
    cfg: &HoktConfig,
    mode: Mode,
) -> Result<Vec<TimestepResult>> {
    run_mode(net, cfg, mode)
}

/// Shared driver for every [`Mode`]. One RNG, seeded from `cfg.evo.seed`,
/// is consumed sequentially across timesteps.
pub fn run_mode(net: &DynamicNetwork, cfg: &HoktConfig, mode: Mode) -> Result<Vec<TimestepResult>> {
    Ok(run_mode_timed(net, cfg, mode, || 0.0)?
        .into_iter()
        .map(|(r, _)| r)
        .collect())
}

/// [`run_mode`] that also reports the time spent on each step, measured with
/// `clock` (milliseconds since any fixed origin).
pub fn run_mode_timed(
    net: &DynamicNetwork,
    cfg: &HoktConfig,
    mode: Mode,
    mut clock: impl FnMut() -> f64,
) -> Result<Vec<(TimestepResult, f64)>> {
    cfg.validate()?;
    let sim = similarity_matrix(net).map_err(|e| e.at_step(mode.name(), 1))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.evo.seed);
    let mut chosen: Vec<Partition> = Vec::with_capacity(net.len());
    let mut results = Vec::with_capacity(net.len());

    for t in 1..=net.len() {
        let started = clock();
        let step = |e: HoktError| e.at_step(mode.name(), t);
        let graph = net.snapshot(t);
        let plan = match (mode, t) {
            (_, 1) | (Mode::Static, _) => TransferPlan::none(),
            (Mode::FirstOrder, _) => TransferPlan::first_order(),
            (Mode::Hokt, _) => plan_transfer(t, &sim, cfg).map_err(step)?,
        };

        // history is most recent first
        let past: Vec<&Partition> = (1..=plan.order).map(|j| &chosen[t - 1 - j]).collect();
        let shared: Vec<Vec<NodeId>> = (1..=plan.order)
            .map(|j| shared_nodes(graph, net.snapshot(t - j)))
            .collect();
        let shared: Vec<&[NodeId]> = shared.iter().map(Vec::as_slice).collect();
        let eval = |p: &Partition| -> Result<ObjectiveVector> {
            let q = modularity(graph, p)?;
            let smooth = if plan.order == 0 {
                0.0
            } else {
                honmi(p, &past, &plan.weights, &shared)?
            };
            Ok(ObjectiveVector::new(q, smooth))
        };
        let front = run_nsga2(graph, eval, &cfg.evo, &mut rng).map_err(step)?;
        let best = pick_solution(&front).map_err(step)?;

        let (nmi_vs_truth, f1_vs_truth) = match net.truth() {
            Some(truth) => {
                let truth = &truth[t - 1];
                (
                    Some(nmi(&best.phenotype, truth, graph.nodes()).map_err(step)?),
                    Some(f1_score(&best.phenotype, truth, graph.nodes()).map_err(step)?),
                )
            }
            None => (None, None),
        };
        results.push((
            TimestepResult {
                t,
                partition: best.phenotype.clone(),
                q: best.objectives.q,
                honmi: best.objectives.smooth,
                nmi_vs_truth,
                f1_vs_truth,
                plan,
                overlap_prev: (t >= 2).then(|| sim.ratio(t - 1, t)),
            },
            clock() - started,
        ));
        chosen.push(best.phenotype.clone());
    }
    Ok(results)
}
