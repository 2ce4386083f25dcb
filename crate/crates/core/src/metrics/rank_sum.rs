use std::f64::consts::SQRT_2;

use statrs::function::erf::erfc;

use crate::error::{HoktError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSumResult {
    /// Mann-Whitney U of the first sample.
    pub u: f64,
    /// Continuity-corrected standard score (non-negative).
    pub z: f64,
    /// Two-sided p-value.
    pub p_value: f64,
}

/// Two-sided Wilcoxon rank-sum test using the normal approximation with
/// tie correction and a 0.5 continuity correction.
pub fn rank_sum_test(sample_a: &[f64], sample_b: &[f64]) -> Result<RankSumResult> {
    let (n1, n2) = (sample_a.len(), sample_b.len());
    if n1 < 5 || n2 < 5 {
        return Err(HoktError::input(format!(
            "rank-sum test needs at least 5 observations per sample, got {n1} and {n2}"
        )));
    }
    if sample_a.iter().chain(sample_b).any(|x| x.is_nan()) {
        return Err(HoktError::input("rank-sum test input contains NaN"));
    }
    let mut pooled: Vec<(f64, bool)> = sample_a
        .iter()
        .map(|&x| (x, true))
        .chain(sample_b.iter().map(|&x| (x, false)))
        .collect();
    pooled.sort_by(|a, b| a.0.total_cmp(&b.0));

    let n = pooled.len();
    let mut rank_sum_a = 0.0;
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && pooled[j + 1].0 == pooled[i].0 {
            j += 1;
        }
        let avg_rank = (i + j) as f64 / 2.0 + 1.0;
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        rank_sum_a += avg_rank * pooled[i..=j].iter().filter(|p| p.1).count() as f64;
        i = j + 1;
    }

    let (n1f, n2f, nf) = (n1 as f64, n2 as f64, n as f64);
    let u = rank_sum_a - n1f * (n1f + 1.0) / 2.0;
    let mean = n1f * n2f / 2.0;
    let var = n1f * n2f / 12.0 * ((nf + 1.0) - tie_term / (nf * (nf - 1.0)));
    if var <= 0.0 {
        return Ok(RankSumResult {
            u,
            z: 0.0,
            p_value: 1.0,
        });
    }
    let z = ((u - mean).abs() - 0.5).max(0.0) / var.sqrt();
    let p_value = erfc(z / SQRT_2).min(1.0);
    Ok(RankSumResult { u, z, p_value })
}
