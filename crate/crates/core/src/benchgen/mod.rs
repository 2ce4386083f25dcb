//! Synthetic dynamic networks with planted ground truth.

mod events;
mod synfix;

pub use events::{gen_events, gen_events_logged, EventKind, EventRecord, EventSpec};
pub use synfix::{gen_synfix, SynfixSpec};

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{HoktError, Result};
use crate::graph::{DynamicNetwork, NodeId, Partition, SnapshotGraph};

/// Keep snapshots 1, 1 + stride, 1 + 2 stride, ... (with their ground
/// truth) and renumber them consecutively.
pub fn great_change_subsample(net: &DynamicNetwork, stride: usize) -> Result<DynamicNetwork> {
    if stride == 0 {
        return Err(HoktError::input("subsampling stride must be at least 1"));
    }
    let snapshots = net.snapshots().iter().step_by(stride).cloned().collect();
    let truth = net
        .truth()
        .map(|truth| truth.iter().step_by(stride).cloned().collect());
    let out = DynamicNetwork::new(snapshots, truth)?;
    match net.external_ids() {
        Some(ids) => out.with_external_ids(ids.to_vec()),
        None => Ok(out),
    }
}

/// Undirected edge set plus current community membership (`None` = absent).
#[derive(Debug, Clone)]
pub(crate) struct Evolving {
    pub membership: Vec<Option<usize>>,
    pub adjacency: Vec<BTreeSet<NodeId>>,
}

impl Evolving {
    pub fn new(membership: Vec<Option<usize>>) -> Self {
        let n = membership.len();
        Evolving {
            membership,
            adjacency: vec![BTreeSet::new(); n],
        }
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> bool {
        if u == v || self.adjacency[u].contains(&v) {
            return false;
        }
        self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
        true
    }

    /// Remove every edge of `v`, returning the former neighbours.
    pub fn isolate(&mut self, v: NodeId) -> Vec<NodeId> {
        let nbrs: Vec<NodeId> = std::mem::take(&mut self.adjacency[v]).into_iter().collect();
        for &u in &nbrs {
            self.adjacency[u].remove(&v);
        }
        nbrs
    }

    pub fn members(&self, community: usize) -> Vec<NodeId> {
        (0..self.membership.len())
            .filter(|&v| self.membership[v] == Some(community))
            .collect()
    }

    fn split_degree(&self, v: NodeId) -> (usize, usize) {
        let own = self.membership[v];
        let intra = self.adjacency[v]
            .iter()
            .filter(|&&u| self.membership[u] == own)
            .count();
        (intra, self.adjacency[v].len() - intra)
    }

    /// Pair up degree stubs at random, rejecting self-loops, repeated edges
    /// and pairs failing `allowed`. Stubs that cannot be placed after a few
    /// reshuffles are dropped.
    pub fn match_stubs<R: Rng + ?Sized>(
        &mut self,
        mut stubs: Vec<NodeId>,
        allowed: impl Fn(NodeId, NodeId) -> bool,
        rng: &mut R,
    ) {
        let mut stale_rounds = 0;
        while stubs.len() >= 2 && stale_rounds < 20 {
            stubs.shuffle(rng);
            let before = stubs.len();
            let mut left = Vec::new();
            for pair in stubs.chunks(2) {
                if let [u, v] = *pair {
                    if !(u != v && allowed(u, v) && self.add_edge(u, v)) {
                        left.push(u);
                        left.push(v);
                    }
                } else {
                    left.extend_from_slice(pair);
                }
            }
            stale_rounds = if left.len() == before {
                stale_rounds + 1
            } else {
                0
            };
            stubs = left;
        }
    }

    /// Connect `v` to partners so that it has about `k_in` neighbours in its
    /// own community and `k_out` outside it. Nodes still short of their own
    /// quota are preferred as partners.
    pub fn wire_node<R: Rng + ?Sized>(
        &mut self,
        v: NodeId,
        k_in: usize,
        k_out: usize,
        rng: &mut R,
    ) {
        let Some(own) = self.membership[v] else {
            return;
        };
        let (have_in, have_out) = self.split_degree(v);
        let inside: Vec<NodeId> = (0..self.membership.len())
            .filter(|&u| {
                u != v && self.membership[u] == Some(own) && !self.adjacency[v].contains(&u)
            })
            .collect();
        let outside: Vec<NodeId> = (0..self.membership.len())
            .filter(|&u| {
                self.membership[u].is_some_and(|c| c != own) && !self.adjacency[v].contains(&u)
            })
            .collect();
        let need_in = k_in.saturating_sub(have_in);
        let need_out = k_out.saturating_sub(have_out);
        for u in self.pick_partners(inside, need_in, |s, u| s.split_degree(u).0 < k_in, rng) {
            self.add_edge(v, u);
        }
        for u in self.pick_partners(outside, need_out, |s, u| s.split_degree(u).1 < k_out, rng) {
            self.add_edge(v, u);
        }
    }

    fn pick_partners<R: Rng + ?Sized>(
        &self,
        candidates: Vec<NodeId>,
        count: usize,
        short: impl Fn(&Self, NodeId) -> bool,
        rng: &mut R,
    ) -> Vec<NodeId> {
        let (mut preferred, mut rest): (Vec<NodeId>, Vec<NodeId>) =
            candidates.into_iter().partition(|&u| short(self, u));
        preferred.shuffle(rng);
        rest.shuffle(rng);
        preferred.into_iter().chain(rest).take(count).collect()
    }

    pub fn snapshot(&self) -> Result<(SnapshotGraph, Partition)> {
        let n = self.membership.len();
        let nodes: Vec<NodeId> = (0..n).filter(|&v| self.membership[v].is_some()).collect();
        let edges: Vec<(NodeId, NodeId)> = (0..n)
            .flat_map(|u| {
                self.adjacency[u]
                    .iter()
                    .filter(move |&&v| u < v)
                    .map(move |&v| (u, v))
            })
            .collect();
        let graph = SnapshotGraph::with_nodes(n, nodes.iter().copied(), &edges)
            .map_err(|e| HoktError::Generation(e.to_string()))?;
        let truth =
            Partition::from_assignment(n, nodes.iter().map(|&v| (v, self.membership[v].unwrap())))?;
        Ok((graph, truth))
    }
}
