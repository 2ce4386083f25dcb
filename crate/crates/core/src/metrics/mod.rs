//! Scalar quality measures for partitions.

mod f1;
mod modularity;
mod nmi;
mod rank_sum;

pub use f1::f1_score;
pub use modularity::modularity;
pub use nmi::{confusion, honmi, nmi, validate_weights, ConfusionMatrix};
pub use rank_sum::{rank_sum_test, RankSumResult};

use serde::{Deserialize, Serialize};

/// The two maximised objectives of one candidate: modularity and the
/// history-weighted smoothness score.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ObjectiveVector {
    pub q: f64,
    pub smooth: f64,
}

impl ObjectiveVector {
    pub fn new(q: f64, smooth: f64) -> Self {
        ObjectiveVector { q, smooth }
    }

    /// `self` is at least as good on both objectives and strictly better on one.
    pub fn dominates(&self, other: &ObjectiveVector) -> bool {
        self.q >= other.q
            && self.smooth >= other.smooth
            && (self.q > other.q || self.smooth > other.smooth)
    }
}
