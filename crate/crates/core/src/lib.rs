//! Evolutionary dynamic community detection with higher-order knowledge
//! transfer.
//!
//! A dynamic network is a sequence of snapshots. Each snapshot is clustered
//! by a two-objective NSGA-II over locus-based chromosomes, maximising
//! modularity against a temporal-smoothness score. The smoothness score is
//! the NMI against the previous snapshot's partition when consecutive
//! snapshots overlap strongly, and a weighted NMI against several past
//! partitions when they do not.
//!
//! Modules:
//! - [`graph`]: snapshots, partitions and component decoding
//! - [`metrics`]: modularity, NMI, weighted NMI, pair F1, rank-sum test
//! - [`evo`]: genetic operators and the NSGA-II engine
//! - [`transfer`]: overlap ratios, transfer planning and the per-step driver
//! - [`benchgen`]: synthetic benchmarks with ground truth
//! - [`io`] and [`experiment`]: dataset files, batch runs and reports

pub mod benchgen;
pub mod error;
pub mod evo;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod transfer;

pub use error::{HoktError, Result};
pub use experiment::{run_experiment, ExperimentConfig};
pub use graph::{
    connected_components, shared_nodes, DynamicNetwork, NodeId, Partition, SnapshotGraph,
};
pub use metrics::ObjectiveVector;
pub use transfer::{baseline_mode, run_hokt, HoktConfig, Mode, TimestepResult, TransferPlan};
