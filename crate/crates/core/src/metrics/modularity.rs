use crate::error::{HoktError, Result};
use crate::graph::{Partition, SnapshotGraph};

/// Newman modularity: the sum over communities of `l_s/m - (d_s/2m)^2`,
/// with `l_s` the intra-community edge count and `d_s` the degree total.
pub fn modularity(graph: &SnapshotGraph, part: &Partition) -> Result<f64> {
    let m = graph.edge_count();
    if m == 0 {
        return Err(HoktError::UndefinedMetric(
            "modularity is undefined on a graph without edges".into(),
        ));
    }
    part.check_covers(graph)?;
    let (dense, k) = part.dense();
    let mut intra = vec![0usize; k];
    let mut degree = vec![0usize; k];
    for &v in graph.nodes() {
        degree[dense[v].unwrap() as usize] += graph.degree(v);
    }
    for &(u, v) in graph.edges() {
        let cu = dense[u].unwrap();
        if cu == dense[v].unwrap() {
            intra[cu as usize] += 1;
        }
    }
    let m = m as f64;
    Ok(intra
        .iter()
        .zip(&degree)
        .map(|(&l, &d)| {
            let frac = d as f64 / (2.0 * m);
            l as f64 / m - frac * frac
        })
        .sum())
}
