//! Batch experiments: many seeded runs of several algorithms on one dataset,
//! written out as CSV tables plus a JSON summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::benchgen::{gen_events, gen_synfix, great_change_subsample, EventSpec, SynfixSpec};
use crate::error::{HoktError, Result};
use crate::evo::EvoConfig;
use crate::graph::DynamicNetwork;
use crate::io::{load_network, node_map_csv, similarity_csv, write};
use crate::metrics::rank_sum_test;
use crate::transfer::{run_mode_timed, similarity_matrix, HoktConfig, Mode, WeightPolicy};

pub const RESULTS_FILE: &str = "results.csv";
pub const TIMINGS_FILE: &str = "timings.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const NODE_MAP_FILE: &str = "node_map.csv";
pub const SIMILARITY_FILE: &str = "similarity.csv";

/// Significance level for win/tie/loss calls.
pub const ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetKind {
    #[default]
    Synfix,
    Events,
    Dir,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetConfig {
    pub kind: DatasetKind,
    /// Dataset directory when `kind = "dir"`.
    pub path: Option<PathBuf>,
    /// Keep every `stride`-th snapshot.
    pub stride: usize,
    pub synfix: SynfixSpec,
    pub events: EventSpec,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        DatasetConfig {
            kind: DatasetKind::Synfix,
            path: None,
            stride: 1,
            synfix: SynfixSpec::default(),
            events: EventSpec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSettings {
    pub algorithms: Vec<Mode>,
    pub runs: usize,
    pub base_seed: u64,
    pub workers: usize,
    pub output_dir: PathBuf,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            algorithms: vec![Mode::Hokt, Mode::FirstOrder],
            runs: 30,
            base_seed: 0,
            workers: 1,
            output_dir: PathBuf::from("results"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransferSettings {
    pub sigma: f64,
    pub max_order: usize,
    /// Fixed weights keyed by timestep; when non-empty this replaces the
    /// similarity-proportional policy.
    pub weights: BTreeMap<String, Vec<f64>>,
}

impl Default for TransferSettings {
    fn default() -> Self {
        TransferSettings {
            sigma: 0.8,
            max_order: 3,
            weights: BTreeMap::new(),
        }
    }
}

/// One experiment, as read from a TOML file.
///
/// ```toml
/// [dataset]
/// kind = "synfix"
/// stride = 2
///
/// [experiment]
/// algorithms = ["hokt", "first_order"]
/// runs = 10
///
/// [hokt]
/// sigma = 0.8
///
/// [evo]
/// generations = 50
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetConfig,
    pub experiment: RunSettings,
    pub hokt: TransferSettings,
    pub evo: EvoConfig,
}

/// Parse `"4=0.6,0.4;5=0.8,0.2"` into a weight schedule.
pub fn parse_weight_schedule(text: &str) -> Result<BTreeMap<String, Vec<f64>>> {
    let mut out = BTreeMap::new();
    for entry in text.split(';').map(str::trim).filter(|e| !e.is_empty()) {
        let (t, ws) = entry
            .split_once('=')
            .ok_or_else(|| HoktError::config(format!("weight entry `{entry}` lacks `=`")))?;
        let t = t.trim();
        t.parse::<usize>()
            .map_err(|_| HoktError::config(format!("`{t}` is not a timestep")))?;
        let weights = ws
            .split(',')
            .map(|w| {
                w.trim()
                    .parse::<f64>()
                    .map_err(|_| HoktError::config(format!("`{w}` is not a weight")))
            })
            .collect::<Result<Vec<f64>>>()?;
        out.insert(t.to_string(), weights);
    }
    Ok(out)
}

impl ExperimentConfig {
    /// Read a config file. A relative dataset path is taken relative to the
    /// file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| HoktError::io(path, e))?;
        let mut cfg = Self::from_toml(&text)
            .map_err(|e| HoktError::config(format!("{}: {e}", path.display())))?;
        if let Some(p) = &cfg.dataset.path {
            if p.is_relative() {
                let base = path.parent().unwrap_or(Path::new(""));
                cfg.dataset.path = Some(base.join(p));
            }
        }
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| HoktError::config(e.message().to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.experiment;
        if s.runs == 0 {
            return Err(HoktError::config("runs must be at least 1"));
        }
        if s.workers == 0 {
            return Err(HoktError::config("workers must be at least 1"));
        }
        if s.algorithms.is_empty() {
            return Err(HoktError::config("at least one algorithm is required"));
        }
        for (i, a) in s.algorithms.iter().enumerate() {
            if s.algorithms[..i].contains(a) {
                return Err(HoktError::config(format!(
                    "algorithm `{}` listed twice",
                    a.name()
                )));
            }
        }
        if self.dataset.stride == 0 {
            return Err(HoktError::config("stride must be at least 1"));
        }
        if self.dataset.kind == DatasetKind::Dir && self.dataset.path.is_none() {
            return Err(HoktError::config("a `dir` dataset needs a path"));
        }
        self.hokt_config().and_then(|c| c.validate())
    }

    /// Transfer settings for one run; the caller sets the seed.
    pub fn hokt_config(&self) -> Result<HoktConfig> {
        let weight_policy = if self.hokt.weights.is_empty() {
            WeightPolicy::SimilarityProportional {
                max_order: self.hokt.max_order,
            }
        } else {
            let mut schedule = BTreeMap::new();
            for (t, w) in &self.hokt.weights {
                let t: usize = t.parse().map_err(|_| {
                    HoktError::config(format!("weight key `{t}` is not a timestep"))
                })?;
                schedule.insert(t, w.clone());
            }
            WeightPolicy::FixedSchedule(schedule)
        };
        Ok(HoktConfig {
            evo: self.evo.clone(),
            sigma: self.hokt.sigma,
            weight_policy,
        })
    }

    pub fn load_dataset(&self) -> Result<DynamicNetwork> {
        self.dataset.build()
    }
}

impl DatasetConfig {
    /// Generate or load the network, then subsample it by `stride`.
    pub fn build(&self) -> Result<DynamicNetwork> {
        let net = match self.kind {
            DatasetKind::Synfix => gen_synfix(&self.synfix)?,
            DatasetKind::Events => gen_events(&self.events)?,
            DatasetKind::Dir => {
                let path = self
                    .path
                    .as_ref()
                    .ok_or_else(|| HoktError::config("a `dir` dataset needs a path"))?;
                load_network(path)?
            }
        };
        great_change_subsample(&net, self.stride)
    }
}

/// One (algorithm, run, timestep) cell of the results table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub algorithm: Mode,
    pub run: usize,
    pub seed: u64,
    pub t: usize,
    pub q: f64,
    pub honmi: f64,
    pub nmi: Option<f64>,
    pub f1: Option<f64>,
    pub order: usize,
    /// Weights joined by `;`, most recent first.
    pub weights: String,
    pub overlap_prev: Option<f64>,
    pub communities: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub algorithm: Mode,
    pub run: usize,
    pub t: usize,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    /// Mean and sample standard deviation (0 for a single value).
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        MeanStd { mean, std }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Win,
    Tie,
    Loss,
}

/// `other` against the reference algorithm on one metric at one timestep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub other: Mode,
    pub metric: String,
    /// `None` with fewer than five runs.
    pub p_value: Option<f64>,
    /// From `other`'s point of view; `None` when no test was possible.
    pub outcome: Option<Outcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepSummary {
    pub t: usize,
    /// algorithm -> metric -> mean/std
    pub metrics: BTreeMap<Mode, BTreeMap<String, MeanStd>>,
    pub comparisons: Vec<Comparison>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub win: usize,
    pub tie: usize,
    pub loss: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub reference: Mode,
    pub runs: usize,
    pub timesteps: usize,
    pub steps: Vec<StepSummary>,
    /// other algorithm -> metric -> counts over timesteps
    pub win_tie_loss: BTreeMap<Mode, BTreeMap<String, Tally>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultsTable {
    pub rows: Vec<ResultRow>,
    pub timings: Vec<TimingRow>,
}

fn metric_values(rows: &[&ResultRow], metric: &str) -> Option<Vec<f64>> {
    rows.iter()
        .map(|r| match metric {
            "nmi" => r.nmi,
            "f1" => r.f1,
            "q" => Some(r.q),
            _ => None,
        })
        .collect()
}

/// Per-timestep statistics and rank-sum comparisons against the reference
/// algorithm (`hokt` when present, otherwise the first one seen).
pub fn summarize(rows: &[ResultRow]) -> Result<Summary> {
    let mut algorithms: Vec<Mode> = Vec::new();
    let mut grid: BTreeMap<(usize, Mode), Vec<&ResultRow>> = BTreeMap::new();
    let mut runs = 0;
    for r in rows {
        if !algorithms.contains(&r.algorithm) {
            algorithms.push(r.algorithm);
        }
        runs = runs.max(r.run + 1);
        grid.entry((r.t, r.algorithm)).or_default().push(r);
    }
    let reference = if algorithms.contains(&Mode::Hokt) {
        Mode::Hokt
    } else {
        *algorithms
            .first()
            .ok_or_else(|| HoktError::input("results table is empty"))?
    };
    let timesteps = rows.iter().map(|r| r.t).max().unwrap_or(0);
    for t in 1..=timesteps {
        for &a in &algorithms {
            let cell = grid.get(&(t, a)).map_or(0, Vec::len);
            if cell != runs {
                return Err(HoktError::input(format!(
                    "results grid is incomplete: {} has {cell} of {runs} runs at timestep {t}",
                    a.name()
                )));
            }
        }
    }

    let mut steps = Vec::with_capacity(timesteps);
    let mut win_tie_loss: BTreeMap<Mode, BTreeMap<String, Tally>> = BTreeMap::new();
    for t in 1..=timesteps {
        let mut metrics = BTreeMap::new();
        for &a in &algorithms {
            let mut per = BTreeMap::new();
            for m in ["nmi", "f1", "q"] {
                if let Some(v) = metric_values(&grid[&(t, a)], m) {
                    per.insert(m.to_string(), MeanStd::of(&v));
                }
            }
            metrics.insert(a, per);
        }
        let mut comparisons = Vec::new();
        for &other in algorithms.iter().filter(|&&a| a != reference) {
            for m in ["nmi", "f1", "q"] {
                let (Some(a), Some(b)) = (
                    metric_values(&grid[&(t, other)], m),
                    metric_values(&grid[&(t, reference)], m),
                ) else {
                    continue;
                };
                let (p_value, outcome) = if runs >= 5 {
                    let p = rank_sum_test(&a, &b)?.p_value;
                    let diff = MeanStd::of(&a).mean - MeanStd::of(&b).mean;
                    let outcome = if p >= ALPHA || diff == 0.0 {
                        Outcome::Tie
                    } else if diff > 0.0 {
                        Outcome::Win
                    } else {
                        Outcome::Loss
                    };
                    (Some(p), Some(outcome))
                } else {
                    (None, None)
                };
                if let Some(o) = outcome {
                    let tally = win_tie_loss
                        .entry(other)
                        .or_default()
                        .entry(m.to_string())
                        .or_default();
                    match o {
                        Outcome::Win => tally.win += 1,
                        Outcome::Tie => tally.tie += 1,
                        Outcome::Loss => tally.loss += 1,
                    }
                }
                comparisons.push(Comparison {
                    other,
                    metric: m.to_string(),
                    p_value,
                    outcome,
                });
            }
        }
        steps.push(StepSummary {
            t,
            metrics,
            comparisons,
        });
    }
    Ok(Summary {
        reference,
        runs,
        timesteps,
        steps,
        win_tie_loss,
    })
}

fn join_weights(w: &[f64]) -> String {
    w.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

/// Run every (algorithm, run) pair. Run `r` uses seed `base_seed + r`.
pub fn run_experiment_on(cfg: &ExperimentConfig, net: &DynamicNetwork) -> Result<ResultsTable> {
    cfg.validate()?;
    let base = cfg.hokt_config()?;
    let s = &cfg.experiment;
    let jobs: Vec<(Mode, usize)> = s
        .algorithms
        .iter()
        .flat_map(|&a| (0..s.runs).map(move |r| (a, r)))
        .collect();
    type JobOutput = Result<(Vec<ResultRow>, Vec<TimingRow>)>;
    let slots: Mutex<Vec<Option<JobOutput>>> = Mutex::new((0..jobs.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);

    let work = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        let Some(&(mode, run)) = jobs.get(i) else {
            break;
        };
        let seed = s.base_seed + run as u64;
        let mut hc = base.clone();
        hc.evo.seed = seed;
        let origin = Instant::now();
        let out = run_mode_timed(net, &hc, mode, || origin.elapsed().as_secs_f64() * 1e3)
            .map_err(|e| e.with_run(run))
            .map(|steps| {
                steps
                    .into_iter()
                    .map(|(r, ms)| {
                        (
                            ResultRow {
                                algorithm: mode,
                                run,
                                seed,
                                t: r.t,
                                q: r.q,
                                honmi: r.honmi,
                                nmi: r.nmi_vs_truth,
                                f1: r.f1_vs_truth,
                                order: r.plan.order,
                                weights: join_weights(&r.plan.weights),
                                overlap_prev: r.overlap_prev,
                                communities: r.partition.community_count(),
                            },
                            TimingRow {
                                algorithm: mode,
                                run,
                                t: r.t,
                                wall_time_ms: ms,
                            },
                        )
                    })
                    .unzip()
            });
        slots.lock().expect("no worker panicked")[i] = Some(out);
    };
    let workers = s.workers.min(jobs.len()).max(1);
    std::thread::scope(|scope| {
        for _ in 1..workers {
            scope.spawn(work);
        }
        work();
    });

    let mut table = ResultsTable {
        rows: Vec::new(),
        timings: Vec::new(),
    };
    for slot in slots.into_inner().expect("no worker panicked") {
        let (rows, timings) =
            slot.ok_or_else(|| HoktError::internal("a scheduled run produced no result"))??;
        table.rows.extend(rows);
        table.timings.extend(timings);
    }
    Ok(table)
}

/// Load or generate the dataset, run everything and write the output files.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultsTable> {
    cfg.validate()?;
    let net = cfg.load_dataset()?;
    let table = run_experiment_on(cfg, &net)?;
    let dir = &cfg.experiment.output_dir;
    fs::create_dir_all(dir).map_err(|e| HoktError::io(dir, e))?;
    write(&dir.join(RESULTS_FILE), &to_csv(&table.rows)?)?;
    write(&dir.join(TIMINGS_FILE), &to_csv(&table.timings)?)?;
    let summary = summarize(&table.rows)?;
    write(&dir.join(SUMMARY_FILE), &summary_json(&summary)?)?;
    write(&dir.join(NODE_MAP_FILE), &node_map_csv(&net))?;
    write(
        &dir.join(SIMILARITY_FILE),
        &similarity_csv(&similarity_matrix(&net)?),
    )?;
    Ok(table)
}

pub fn summary_json(summary: &Summary) -> Result<String> {
    serde_json::to_string_pretty(summary)
        .map(|s| s + "\n")
        .map_err(|e| HoktError::internal(format!("cannot encode summary: {e}")))
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)
            .map_err(|e| HoktError::internal(format!("cannot encode row: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| HoktError::internal(format!("cannot encode table: {e}")))?;
    String::from_utf8(bytes).map_err(|e| HoktError::internal(e.to_string()))
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => HoktError::io(path, io),
        other => HoktError::input(format!("{}: {other:?}", path.display())),
    })?;
    reader
        .deserialize()
        .enumerate()
        .map(|(i, r)| {
            r.map_err(|e| HoktError::input(format!("{}: row {}: {e}", path.display(), i + 1)))
        })
        .collect()
}

/// Plain-text tables of mean ± std per timestep, with p-values and
/// win/tie/loss against the reference algorithm.
pub fn render_report(summary: &Summary) -> String {
    let mut out = String::new();
    let algorithms: Vec<Mode> = summary
        .steps
        .first()
        .map(|s| s.metrics.keys().copied().collect())
        .unwrap_or_default();
    let others: Vec<Mode> = algorithms
        .iter()
        .copied()
        .filter(|&a| a != summary.reference)
        .collect();
    let _ = writeln!(
        out,
        "{} runs, {} timesteps, reference {}",
        summary.runs,
        summary.timesteps,
        summary.reference.name()
    );
    for metric in ["nmi", "f1", "q"] {
        let present = summary
            .steps
            .iter()
            .all(|s| s.metrics.values().all(|m| m.contains_key(metric)));
        if !present {
            continue;
        }
        let _ = writeln!(out, "\n{}", metric.to_uppercase());
        let mut header = format!("{:>4}", "t");
        for a in &algorithms {
            let _ = write!(header, "  {:>17}", a.name());
        }
        for o in &others {
            let _ = write!(header, "  {:>10}", format!("p({})", o.name()));
        }
        let _ = writeln!(out, "{header}");
        for step in &summary.steps {
            let _ = write!(out, "{:>4}", step.t);
            for a in &algorithms {
                let ms = &step.metrics[a][metric];
                let _ = write!(out, "  {:>17}", format!("{:.4} ± {:.4}", ms.mean, ms.std));
            }
            for o in &others {
                let c = step
                    .comparisons
                    .iter()
                    .find(|c| c.other == *o && c.metric == metric);
                let cell = match c.and_then(|c| c.p_value.map(|p| (p, c.outcome))) {
                    Some((p, Some(Outcome::Win))) => format!("{p:.4} +"),
                    Some((p, Some(Outcome::Loss))) => format!("{p:.4} -"),
                    Some((p, _)) => format!("{p:.4} ="),
                    None => "n/a".to_string(),
                };
                let _ = write!(out, "  {cell:>10}");
            }
            out.push('\n');
        }
        for o in &others {
            if let Some(tally) = summary.win_tie_loss.get(o).and_then(|m| m.get(metric)) {
                let _ = writeln!(
                    out,
                    "win/tie/loss {}: {}/{}/{}",
                    o.name(),
                    tally.win,
                    tally.tie,
                    tally.loss
                );
            }
        }
    }
    out
}

/// Summarise a results file written by [`run_experiment`].
pub fn report(results: &Path) -> Result<String> {
    let rows = read_results(results)?;
    Ok(render_report(&summarize(&rows)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        cfg.dataset.synfix.timesteps = 2;
        cfg.evo.pop_size = 8;
        cfg.evo.generations = 3;
        cfg.experiment.runs = 2;
        cfg
    }

    #[test]
    fn parses_weight_schedule() {
        let s = parse_weight_schedule("4=0.6,0.4; 5=0.8,0.2").unwrap();
        assert_eq!(s["4"], vec![0.6, 0.4]);
        assert_eq!(s["5"], vec![0.8, 0.2]);
        assert!(parse_weight_schedule("x=1").is_err());
        assert!(parse_weight_schedule("4").is_err());
    }

    #[test]
    fn toml_sections() {
        let cfg = ExperimentConfig::from_toml(
            r#"
[dataset]
kind = "events"
stride = 2
[dataset.events]
kind = "merge_split"
[experiment]
algorithms = ["static"]
runs = 3
[hokt]
sigma = 0.5
[hokt.weights]
3 = [0.7, 0.3]
[evo]
pop_size = 10
"#,
        )
        .unwrap();
        assert_eq!(cfg.dataset.kind, DatasetKind::Events);
        assert_eq!(cfg.experiment.algorithms, vec![Mode::Static]);
        assert_eq!(cfg.evo.pop_size, 10);
        assert_eq!(cfg.evo.generations, 100);
        let hc = cfg.hokt_config().unwrap();
        assert_eq!(
            hc.weight_policy,
            WeightPolicy::FixedSchedule([(3, vec![0.7, 0.3])].into_iter().collect())
        );
        assert!(ExperimentConfig::from_toml("[experiment]\nbogus = 1").is_err());
    }

    #[test]
    fn invalid_settings() {
        let mut cfg = small();
        cfg.experiment.runs = 0;
        assert!(matches!(cfg.validate(), Err(HoktError::Config(_))));
        let mut cfg = small();
        cfg.experiment.algorithms.clear();
        assert!(cfg.validate().is_err());
        let mut cfg = small();
        cfg.experiment.algorithms = vec![Mode::Static, Mode::Static];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn one_cell_table() {
        let mut cfg = small();
        cfg.dataset.synfix.timesteps = 1;
        cfg.experiment.algorithms = vec![Mode::Static];
        cfg.experiment.runs = 1;
        let net = cfg.load_dataset().unwrap();
        let table = run_experiment_on(&cfg, &net).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.timings.len(), 1);
    }

    #[test]
    fn same_seed_same_rows() {
        let mut cfg = small();
        cfg.experiment.algorithms = vec![Mode::Hokt];
        let net = cfg.load_dataset().unwrap();
        let a = run_experiment_on(&cfg, &net).unwrap();
        cfg.experiment.workers = 3;
        let b = run_experiment_on(&cfg, &net).unwrap();
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.rows.len(), 4);
    }

    #[test]
    fn tally_from_other_side() {
        let mut rows = Vec::new();
        for run in 0..6 {
            for (algorithm, nmi) in [(Mode::Hokt, 0.9), (Mode::FirstOrder, 0.5)] {
                rows.push(ResultRow {
                    algorithm,
                    run,
                    seed: run as u64,
                    t: 1,
                    q: 0.3,
                    honmi: 0.0,
                    nmi: Some(nmi + run as f64 * 0.001),
                    f1: None,
                    order: 0,
                    weights: String::new(),
                    overlap_prev: None,
                    communities: 2,
                });
            }
        }
        let s = summarize(&rows).unwrap();
        assert_eq!(s.reference, Mode::Hokt);
        let nmi = &s.win_tie_loss[&Mode::FirstOrder]["nmi"];
        assert_eq!((nmi.win, nmi.tie, nmi.loss), (0, 0, 1));
        let q = &s.win_tie_loss[&Mode::FirstOrder]["q"];
        assert_eq!((q.win, q.tie, q.loss), (0, 1, 0));
        assert!(!s.steps[0].metrics[&Mode::Hokt].contains_key("f1"));
        assert!(render_report(&s).contains("win/tie/loss first_order: 0/0/1"));

        rows.pop();
        assert!(summarize(&rows).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let cfg = small();
        let net = cfg.load_dataset().unwrap();
        let table = run_experiment_on(&cfg, &net).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(RESULTS_FILE);
        fs::write(&path, to_csv(&table.rows).unwrap()).unwrap();
        assert_eq!(read_results(&path).unwrap(), table.rows);
    }
}
