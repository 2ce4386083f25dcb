use crate::error::Result;
use crate::graph::{NodeId, Partition};

use super::nmi::confusion;

fn pairs(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Pair-counting F1 of `pred` against `truth`.
///
/// A node pair is a true positive when both partitions co-cluster it. The
/// score is `2TP / (2TP + FP + FN)`, which is the harmonic mean of pair
/// precision and recall; when neither partition co-clusters any pair it is 1.
pub fn f1_score(pred: &Partition, truth: &Partition, nodes: &[NodeId]) -> Result<f64> {
    let c = confusion(pred, truth, nodes)?;
    let tp: u64 = c.counts.iter().flatten().map(|&x| pairs(x)).sum();
    let pred_pairs: u64 = c.row_sums.iter().map(|&x| pairs(x)).sum();
    let truth_pairs: u64 = c.col_sums.iter().map(|&x| pairs(x)).sum();
    let fp = pred_pairs - tp;
    let fn_ = truth_pairs - tp;
    let denom = 2 * tp + fp + fn_;
    if denom == 0 {
        return Ok(1.0);
    }
    Ok(2.0 * tp as f64 / denom as f64)
}
