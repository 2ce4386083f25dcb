//! Dataset directories and similarity output.
//!
//! A dataset is a directory holding one `t<k>.edges` file per timestep
//! (`k = 1..T`, one whitespace-separated `u v` pair per line, `#` starts a
//! comment) and optionally a matching `t<k>.labels` file per timestep with
//! one `node label` pair per line. Node tokens are arbitrary strings; they
//! are mapped to dense ids in ascending order (numeric when every token is
//! an integer). A snapshot's nodes are the endpoints of its edges plus the
//! nodes named in its labels file.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{HoktError, Result};
use crate::graph::{DynamicNetwork, NodeId, Partition, SnapshotGraph};
use crate::transfer::{similarity_matrix, SimilarityMatrix};

pub const META_FILE: &str = "meta.json";

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| HoktError::io(path, e))
}

pub(crate) fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| HoktError::io(path, e))
}

/// Non-comment lines as token pairs, with 1-based line numbers.
fn parse_pairs(path: &Path) -> Result<Vec<(usize, String, String)>> {
    let text = read(path)?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            [a, b] => out.push((i + 1, a.to_string(), b.to_string())),
            _ => {
                return Err(HoktError::input(format!(
                    "{}:{}: expected two whitespace-separated fields, found {}",
                    path.display(),
                    i + 1,
                    tokens.len()
                )))
            }
        }
    }
    Ok(out)
}

/// Timesteps present as `t<k>.<ext>` files in `dir`.
fn timesteps_with(dir: &Path, ext: &str) -> Result<BTreeSet<usize>> {
    let entries = fs::read_dir(dir).map_err(|e| HoktError::io(dir, e))?;
    let mut steps = BTreeSet::new();
    for entry in entries {
        let entry = entry.map_err(|e| HoktError::io(dir, e))?;
        let name = entry.file_name();
        let Some(name) = name.to_str() else { continue };
        let Some(stem) = name.strip_suffix(ext).and_then(|s| s.strip_prefix('t')) else {
            continue;
        };
        if let Ok(k) = stem.parse::<usize>() {
            steps.insert(k);
        }
    }
    Ok(steps)
}

fn first_gap(steps: &BTreeSet<usize>, upto: usize) -> Option<usize> {
    (1..=upto).find(|k| !steps.contains(k))
}

fn sort_ids(ids: BTreeSet<String>) -> Vec<String> {
    let mut ids: Vec<String> = ids.into_iter().collect();
    if ids.iter().all(|s| s.parse::<u64>().is_ok()) {
        ids.sort_by_key(|s| s.parse::<u64>().unwrap());
    }
    ids
}

pub fn load_network(dir: &Path) -> Result<DynamicNetwork> {
    let edge_steps = timesteps_with(dir, ".edges")?;
    let Some(&last) = edge_steps.iter().next_back() else {
        return Err(HoktError::input(format!(
            "{} contains no t<k>.edges files",
            dir.display()
        )));
    };
    if let Some(k) = first_gap(&edge_steps, last) {
        return Err(HoktError::input(format!(
            "timestep numbering has a gap: t{k}.edges is missing"
        )));
    }
    let label_steps = timesteps_with(dir, ".labels")?;
    let has_labels = !label_steps.is_empty();
    if has_labels {
        if let Some(k) = first_gap(&label_steps, last) {
            return Err(HoktError::input(format!(
                "ground truth is incomplete: t{k}.labels is missing"
            )));
        }
    }

    let mut edge_files = Vec::with_capacity(last);
    let mut label_files = Vec::with_capacity(last);
    let mut ids = BTreeSet::new();
    for k in 1..=last {
        let edges = parse_pairs(&dir.join(format!("t{k}.edges")))?;
        for (_, a, b) in &edges {
            ids.insert(a.clone());
            ids.insert(b.clone());
        }
        edge_files.push(edges);
        if has_labels {
            let path = dir.join(format!("t{k}.labels"));
            let mut labels = Vec::new();
            for (line, node, label) in parse_pairs(&path)? {
                let label: usize = label.parse().map_err(|_| {
                    HoktError::input(format!(
                        "{}:{line}: label `{label}` is not a non-negative integer",
                        path.display()
                    ))
                })?;
                ids.insert(node.clone());
                labels.push((line, node, label));
            }
            label_files.push((path, labels));
        }
    }

    let external = sort_ids(ids);
    let dense: HashMap<&str, NodeId> = external
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let universe = external.len();

    let mut snapshots = Vec::with_capacity(last);
    let mut truth = Vec::with_capacity(last);
    for (k, edge_file) in edge_files.iter().enumerate() {
        let edges: Vec<(NodeId, NodeId)> = edge_file
            .iter()
            .map(|(_, a, b)| (dense[a.as_str()], dense[b.as_str()]))
            .collect();
        let mut nodes: BTreeSet<NodeId> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        if let Some((path, labels)) = label_files.get(k) {
            let mut assignment = BTreeMap::new();
            for (line, node, label) in labels {
                let v = dense[node.as_str()];
                if assignment.insert(v, *label).is_some() {
                    return Err(HoktError::input(format!(
                        "{}:{line}: node `{node}` labelled twice",
                        path.display()
                    )));
                }
                nodes.insert(v);
            }
            truth.push(Partition::from_assignment(universe, assignment)?);
        }
        let graph = SnapshotGraph::with_nodes(universe, nodes, &edges)
            .map_err(|e| HoktError::input(format!("t{}.edges: {e}", k + 1)))?;
        snapshots.push(graph);
    }
    DynamicNetwork::new(snapshots, has_labels.then_some(truth))?.with_external_ids(external)
}

/// Write `net` as a dataset directory (created if needed), plus an optional
/// `meta.json` describing how it was produced.
pub fn write_network<M: Serialize>(
    net: &DynamicNetwork,
    dir: &Path,
    meta: Option<&M>,
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| HoktError::io(dir, e))?;
    let name = |v: NodeId| -> String {
        match net.external_ids() {
            Some(ids) => ids[v].clone(),
            None => v.to_string(),
        }
    };
    for (k, g) in net.snapshots().iter().enumerate() {
        let mut text = String::new();
        for &(u, v) in g.edges() {
            let _ = writeln!(text, "{} {}", name(u), name(v));
        }
        write(&dir.join(format!("t{}.edges", k + 1)), &text)?;
    }
    if let Some(truth) = net.truth() {
        for (k, p) in truth.iter().enumerate() {
            let mut text = String::new();
            for (v, l) in p.assignment() {
                let _ = writeln!(text, "{} {}", name(v), l);
            }
            write(&dir.join(format!("t{}.labels", k + 1)), &text)?;
        }
    }
    if let Some(meta) = meta {
        let json = serde_json::to_string_pretty(meta)
            .map_err(|e| HoktError::internal(format!("cannot encode metadata: {e}")))?;
        write(&dir.join(META_FILE), &(json + "\n"))?;
    }
    Ok(())
}

/// `dense_id,external_id` rows.
pub fn node_map_csv(net: &DynamicNetwork) -> String {
    let mut out = String::from("node,external_id\n");
    for v in 0..net.universe() {
        let ext = net
            .external_ids()
            .map_or_else(|| v.to_string(), |ids| ids[v].clone());
        let _ = writeln!(out, "{v},{ext}");
    }
    out
}

/// Similarity matrix as CSV with timestep headers and 4 decimals.
pub fn similarity_csv(sim: &SimilarityMatrix) -> String {
    let mut out = String::from("t");
    for j in 1..=sim.size() {
        let _ = write!(out, ",{j}");
    }
    out.push('\n');
    for (i, row) in sim.rows().enumerate() {
        let _ = write!(out, "{}", i + 1);
        for v in row {
            let _ = write!(out, ",{v:.4}");
        }
        out.push('\n');
    }
    out
}

pub fn emit_similarity(net: &DynamicNetwork, out: &Path) -> Result<()> {
    let sim = similarity_matrix(net)?;
    write(out, &similarity_csv(&sim))
}
