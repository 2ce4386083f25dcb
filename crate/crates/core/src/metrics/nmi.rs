use crate::error::{HoktError, Result};
use crate::graph::{Label, NodeId, Partition};

/// Contingency table of two partitions restricted to a node set.
///
/// Rows follow the ascending labels of the first partition, columns those of
/// the second; labels absent from the node set do not appear.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    pub row_labels: Vec<Label>,
    pub col_labels: Vec<Label>,
    pub counts: Vec<Vec<u64>>,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
    pub total: u64,
}

fn labels_on(a: &Partition, b: &Partition, nodes: &[NodeId]) -> Result<Vec<(Label, Label)>> {
    if nodes.is_empty() {
        return Err(HoktError::input(
            "cannot compare partitions on an empty node set",
        ));
    }
    nodes
        .iter()
        .map(|&v| match (a.label(v), b.label(v)) {
            (Some(x), Some(y)) => Ok((x, y)),
            _ => Err(HoktError::input(format!(
                "node {v} is not labelled by both partitions"
            ))),
        })
        .collect()
}

pub fn confusion(a: &Partition, b: &Partition, nodes: &[NodeId]) -> Result<ConfusionMatrix> {
    let pairs = labels_on(a, b, nodes)?;
    let mut row_labels: Vec<Label> = pairs.iter().map(|p| p.0).collect();
    let mut col_labels: Vec<Label> = pairs.iter().map(|p| p.1).collect();
    row_labels.sort_unstable();
    row_labels.dedup();
    col_labels.sort_unstable();
    col_labels.dedup();
    let mut counts = vec![vec![0u64; col_labels.len()]; row_labels.len()];
    for (x, y) in &pairs {
        let i = row_labels.binary_search(x).unwrap();
        let j = col_labels.binary_search(y).unwrap();
        counts[i][j] += 1;
    }
    let row_sums = counts.iter().map(|r| r.iter().sum()).collect();
    let col_sums = (0..col_labels.len())
        .map(|j| counts.iter().map(|r| r[j]).sum())
        .collect();
    Ok(ConfusionMatrix {
        row_labels,
        col_labels,
        counts,
        row_sums,
        col_sums,
        total: pairs.len() as u64,
    })
}

/// Run-length counts of a sorted sequence.
fn runs<T: PartialEq + Copy>(sorted: &[T]) -> Vec<(T, u64)> {
    let mut out: Vec<(T, u64)> = Vec::new();
    for &x in sorted {
        match out.last_mut() {
            Some((last, n)) if *last == x => *n += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

fn count_of<T: Ord + Copy>(runs: &[(T, u64)], key: T) -> u64 {
    let i = runs.binary_search_by(|r| r.0.cmp(&key)).unwrap();
    runs[i].1
}

/// Normalized mutual information of two partitions over `nodes`, in `[0, 1]`.
///
/// Uses `0 log 0 = 0`. When both partitions put every node in one community
/// the ratio is `0/0` and the result is 1; when only one does, it is 0.
pub fn nmi(a: &Partition, b: &Partition, nodes: &[NodeId]) -> Result<f64> {
    let mut pairs = labels_on(a, b, nodes)?;
    pairs.sort_unstable();
    let rows_sorted: Vec<Label> = pairs.iter().map(|p| p.0).collect();
    let mut cols_sorted: Vec<Label> = pairs.iter().map(|p| p.1).collect();
    cols_sorted.sort_unstable();
    let rows = runs(&rows_sorted);
    let cols = runs(&cols_sorted);
    let cells = runs(&pairs);

    let ln_n = (pairs.len() as f64).ln();
    let mut numerator = 0.0;
    for &((x, y), c) in &cells {
        let cij = c as f64;
        let ci = count_of(&rows, x) as f64;
        let cj = count_of(&cols, y) as f64;
        numerator += cij * (cij.ln() + ln_n - ci.ln() - cj.ln());
    }
    numerator *= -2.0;

    let entropy_term = |sums: &[(Label, u64)]| -> f64 {
        sums.iter()
            .map(|&(_, s)| {
                let s = s as f64;
                s * (s.ln() - ln_n)
            })
            .sum()
    };
    let denominator = entropy_term(&rows) + entropy_term(&cols);
    if denominator == 0.0 {
        return Ok(1.0);
    }
    Ok((numerator / denominator).clamp(0.0, 1.0))
}

/// History-weighted NMI of `current` against past partitions.
///
/// `history` is most-recent-first; `weights[j]` multiplies the NMI against
/// `history[j]`, computed on `node_sets[j]`.
pub fn honmi(
    current: &Partition,
    history: &[&Partition],
    weights: &[f64],
    node_sets: &[&[NodeId]],
) -> Result<f64> {
    validate_weights(weights)?;
    if history.len() != weights.len() || node_sets.len() != weights.len() {
        return Err(HoktError::config(format!(
            "{} history partitions, {} weights and {} node sets",
            history.len(),
            weights.len(),
            node_sets.len()
        )));
    }
    let mut total = 0.0;
    for ((past, &w), nodes) in history.iter().zip(weights).zip(node_sets) {
        total += w * nmi(current, past, nodes)?;
    }
    Ok(total)
}

/// Weights must be a non-empty, non-negative vector summing to 1 (within 1e-9).
pub fn validate_weights(weights: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return Err(HoktError::config("transfer weights are empty"));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(HoktError::config(format!(
            "transfer weights must be non-negative: {weights:?}"
        )));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(HoktError::config(format!(
            "transfer weights sum to {sum}, expected 1"
        )));
    }
    Ok(())
}
