//! Browser bindings. Every exported function returns a JSON string; failures
//! come back as `error[CODE] message`.

use hokt_core::benchgen::{gen_synfix, great_change_subsample, SynfixSpec};
use hokt_core::evo::Genotype;
use hokt_core::metrics::modularity;
use hokt_core::transfer::{run_mode, similarity_matrix};
use hokt_core::{connected_components, HoktConfig, HoktError, Mode, Result, SnapshotGraph};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn to_js(r: Result<String>) -> std::result::Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&format!("error[{}] {e}", e.code())))
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string(value).map_err(|e| HoktError::internal(e.to_string()))
}

fn synfix(seed: u64, timesteps: usize, stride: usize) -> Result<hokt_core::DynamicNetwork> {
    let net = gen_synfix(&SynfixSpec {
        seed,
        timesteps,
        ..SynfixSpec::default()
    })?;
    great_change_subsample(&net, stride)
}

#[derive(Serialize)]
struct Heatmap {
    size: usize,
    values: Vec<Vec<f64>>,
}

pub fn similarity_json(seed: u64, timesteps: usize, stride: usize) -> Result<String> {
    let sim = similarity_matrix(&synfix(seed, timesteps, stride)?)?;
    json(&Heatmap {
        size: sim.size(),
        values: sim.rows().map(<[f64]>::to_vec).collect(),
    })
}

/// Overlap-ratio matrix of a SYNFIX network.
#[wasm_bindgen]
pub fn similarity_heatmap(
    seed: u64,
    timesteps: usize,
    stride: usize,
) -> std::result::Result<String, JsValue> {
    to_js(similarity_json(seed, timesteps, stride))
}

#[derive(Serialize)]
struct StepRow {
    t: usize,
    overlap: Option<f64>,
    order: usize,
    weights: Vec<f64>,
    hokt: Option<f64>,
    first_order: Option<f64>,
}

pub fn compare_json(
    seed: u64,
    timesteps: usize,
    stride: usize,
    pop_size: usize,
    generations: usize,
) -> Result<String> {
    let net = synfix(seed, timesteps, stride)?;
    let mut cfg = HoktConfig::default();
    cfg.evo.seed = seed;
    cfg.evo.pop_size = pop_size;
    cfg.evo.generations = generations;
    let hokt = run_mode(&net, &cfg, Mode::Hokt)?;
    let first = run_mode(&net, &cfg, Mode::FirstOrder)?;
    let rows: Vec<StepRow> = hokt
        .into_iter()
        .zip(first)
        .map(|(h, f)| StepRow {
            t: h.t,
            overlap: h.overlap_prev,
            order: h.plan.order,
            weights: h.plan.weights,
            hokt: h.nmi_vs_truth,
            first_order: f.nmi_vs_truth,
        })
        .collect();
    json(&rows)
}

/// NMI against the planted truth per step, overlap-driven transfer against
/// first-order transfer.
#[wasm_bindgen]
pub fn compare_transfer(
    seed: u64,
    timesteps: usize,
    stride: usize,
    pop_size: usize,
    generations: usize,
) -> std::result::Result<String, JsValue> {
    to_js(compare_json(seed, timesteps, stride, pop_size, generations))
}

#[derive(Serialize)]
struct Decoded {
    nodes: usize,
    edges: Vec<(usize, usize)>,
    communities: Vec<Vec<usize>>,
    modularity: Option<f64>,
}

fn parse_ids(text: &str) -> Result<Vec<usize>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| match s.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(HoktError::input(format!(
                "`{s}` is not a node number (1, 2, ...)"
            ))),
        })
        .collect()
}

/// Decode a locus-based chromosome. Nodes are numbered from 1; `edges` holds
/// pairs, `genes` one neighbour per node.
pub fn decode_json(edges: &str, genes: &str) -> Result<String> {
    let flat = parse_ids(edges)?;
    if flat.len() % 2 != 0 {
        return Err(HoktError::input("edge list has an odd number of endpoints"));
    }
    let pairs: Vec<(usize, usize)> = flat.chunks(2).map(|c| (c[0], c[1])).collect();
    let genes = parse_ids(genes)?;
    let n = pairs
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .chain(genes.iter().copied())
        .max()
        .map_or(0, |m| m + 1)
        .max(genes.len());
    if genes.len() != n {
        return Err(HoktError::input(format!(
            "expected one gene for each of {n} nodes, got {}",
            genes.len()
        )));
    }
    let graph = SnapshotGraph::build(n, &pairs)?;
    let geno = Genotype { genes };
    if !geno.is_valid_for(&graph) {
        return Err(HoktError::input(
            "every gene must name a neighbour of its node (or the node itself when isolated)",
        ));
    }
    let part = connected_components(&graph, Some(&geno.links(&graph)))?;
    let one_based = |v: usize| v + 1;
    json(&Decoded {
        nodes: n,
        edges: graph
            .edges()
            .iter()
            .map(|&(u, v)| (one_based(u), one_based(v)))
            .collect(),
        communities: part
            .communities()
            .into_iter()
            .map(|c| c.into_iter().map(one_based).collect())
            .collect(),
        modularity: modularity(&graph, &part).ok(),
    })
}

#[wasm_bindgen]
pub fn decode_genotype(edges: &str, genes: &str) -> std::result::Result<String, JsValue> {
    to_js(decode_json(edges, genes))
}
