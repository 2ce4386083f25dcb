//! Snapshot and dynamic-network data model.
//!
//! Node identifiers are dense `0..universe` indices shared by every snapshot
//! of a [`DynamicNetwork`]. A snapshot may contain only a subset of the
//! universe (nodes can leave and re-enter the network); absent nodes have no
//! neighbours and no community label.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{HoktError, Result};

pub type NodeId = usize;
pub type Label = usize;

/// One timestep of an undirected simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnapshotGraph {
    universe: usize,
    nodes: Vec<NodeId>,
    present: Vec<bool>,
    adjacency: Vec<Vec<NodeId>>,
    edges: Vec<(NodeId, NodeId)>,
}

impl SnapshotGraph {
    /// Graph over all of `0..node_count`. Duplicate pairs and both
    /// orientations of one edge collapse into a single undirected edge.
    pub fn build(node_count: usize, edge_list: &[(NodeId, NodeId)]) -> Result<Self> {
        Self::with_nodes(node_count, 0..node_count, edge_list)
    }

    /// Graph over the given subset of a `universe`-sized id space.
    pub fn with_nodes(
        universe: usize,
        nodes: impl IntoIterator<Item = NodeId>,
        edge_list: &[(NodeId, NodeId)],
    ) -> Result<Self> {
        let mut present = vec![false; universe];
        for v in nodes {
            if v >= universe {
                return Err(HoktError::input(format!(
                    "node {v} out of range for {universe} nodes"
                )));
            }
            present[v] = true;
        }
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(u, v) in edge_list {
            if u >= universe || v >= universe {
                return Err(HoktError::input(format!(
                    "edge ({u}, {v}) has an endpoint out of range for {universe} nodes"
                )));
            }
            if u == v {
                return Err(HoktError::input(format!("self-loop on node {u}")));
            }
            if !present[u] || !present[v] {
                return Err(HoktError::input(format!(
                    "edge ({u}, {v}) touches a node absent from the snapshot"
                )));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        edges.dedup();

        let mut adjacency = vec![Vec::new(); universe];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let nodes = (0..universe).filter(|&v| present[v]).collect();
        Ok(SnapshotGraph {
            universe,
            nodes,
            present,
            adjacency,
            edges,
        })
    }

    /// Size of the id space (not the number of present nodes).
    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Present nodes in ascending order.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.present.get(v).copied().unwrap_or(false)
    }

    /// Undirected edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        self.adjacency.get(v).map_or(&[], Vec::as_slice)
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }
}

/// Disjoint communities: each present node carries exactly one label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    labels: Vec<Option<Label>>,
}

impl Partition {
    /// Wrap a per-node label vector (`None` for nodes outside the partition).
    pub fn from_labels(labels: Vec<Option<Label>>) -> Self {
        Partition { labels }
    }

    /// Partition where every listed node gets its paired label.
    pub fn from_assignment(
        universe: usize,
        assignment: impl IntoIterator<Item = (NodeId, Label)>,
    ) -> Result<Self> {
        let mut labels = vec![None; universe];
        for (v, l) in assignment {
            let slot = labels.get_mut(v).ok_or_else(|| {
                HoktError::input(format!("node {v} out of range for {universe} nodes"))
            })?;
            if slot.is_some() {
                return Err(HoktError::input(format!("node {v} assigned twice")));
            }
            *slot = Some(l);
        }
        Ok(Partition { labels })
    }

    /// Every node of `graph` in one community.
    pub fn single_community(graph: &SnapshotGraph) -> Self {
        let mut labels = vec![None; graph.universe()];
        for &v in graph.nodes() {
            labels[v] = Some(0);
        }
        Partition { labels }
    }

    /// Every node of `graph` in its own community.
    pub fn singletons(graph: &SnapshotGraph) -> Self {
        let mut labels = vec![None; graph.universe()];
        for &v in graph.nodes() {
            labels[v] = Some(v);
        }
        Partition { labels }
    }

    pub fn universe(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: NodeId) -> Option<Label> {
        self.labels.get(v).copied().flatten()
    }

    pub fn labels(&self) -> &[Option<Label>] {
        &self.labels
    }

    /// Labelled nodes with their labels, ascending by node.
    pub fn assignment(&self) -> impl Iterator<Item = (NodeId, Label)> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(v, l)| l.map(|l| (v, l)))
    }

    pub fn community_count(&self) -> usize {
        let mut seen: Vec<Label> = self.labels.iter().flatten().copied().collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Relabel every community by its smallest member.
    pub fn canonical(&self) -> Partition {
        let mut first: HashMap<Label, NodeId> = HashMap::new();
        let labels = self
            .labels
            .iter()
            .enumerate()
            .map(|(v, l)| l.map(|l| *first.entry(l).or_insert(v)))
            .collect();
        Partition { labels }
    }

    /// Communities as sorted member lists, ordered by their smallest member.
    pub fn communities(&self) -> Vec<Vec<NodeId>> {
        let mut index: HashMap<Label, usize> = HashMap::new();
        let mut groups: Vec<Vec<NodeId>> = Vec::new();
        for (v, l) in self.assignment() {
            let slot = *index.entry(l).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[slot].push(v);
        }
        groups
    }

    /// Error unless every present node of `graph` is labelled.
    pub fn check_covers(&self, graph: &SnapshotGraph) -> Result<()> {
        match graph.nodes().iter().find(|&&v| self.label(v).is_none()) {
            Some(v) => Err(HoktError::input(format!("node {v} has no community label"))),
            None => Ok(()),
        }
    }

    /// Dense `0..k` community indices for each node, plus `k`.
    pub(crate) fn dense(&self) -> (Vec<Option<u32>>, usize) {
        let max = self.labels.iter().flatten().copied().max().unwrap_or(0);
        let mut next = 0u32;
        let dense = if max < 4 * self.labels.len() + 16 {
            let mut map = vec![u32::MAX; max + 1];
            self.labels
                .iter()
                .map(|l| {
                    l.map(|l| {
                        if map[l] == u32::MAX {
                            map[l] = next;
                            next += 1;
                        }
                        map[l]
                    })
                })
                .collect()
        } else {
            let mut map: HashMap<Label, u32> = HashMap::new();
            self.labels
                .iter()
                .map(|l| {
                    l.map(|l| {
                        *map.entry(l).or_insert_with(|| {
                            next += 1;
                            next - 1
                        })
                    })
                })
                .collect()
        };
        (dense, next as usize)
    }
}

/// Ordered snapshots over a shared node universe, with optional ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicNetwork {
    snapshots: Vec<SnapshotGraph>,
    truth: Option<Vec<Partition>>,
    external_ids: Option<Vec<String>>,
}

impl DynamicNetwork {
    pub fn new(snapshots: Vec<SnapshotGraph>, truth: Option<Vec<Partition>>) -> Result<Self> {
        let Some(first) = snapshots.first() else {
            return Err(HoktError::input(
                "a dynamic network needs at least one snapshot",
            ));
        };
        let universe = first.universe();
        if snapshots.iter().any(|g| g.universe() != universe) {
            return Err(HoktError::input("snapshots disagree on the node universe"));
        }
        if let Some(truth) = &truth {
            if truth.len() != snapshots.len() {
                return Err(HoktError::input(format!(
                    "{} ground-truth partitions for {} snapshots",
                    truth.len(),
                    snapshots.len()
                )));
            }
            for (t, (g, p)) in snapshots.iter().zip(truth).enumerate() {
                let exact = p.universe() == universe
                    && (0..universe).all(|v| g.contains(v) == p.label(v).is_some());
                if !exact {
                    return Err(HoktError::input(format!(
                        "ground truth at timestep {} does not cover exactly the snapshot's nodes",
                        t + 1
                    )));
                }
            }
        }
        Ok(DynamicNetwork {
            snapshots,
            truth,
            external_ids: None,
        })
    }

    /// Attach the external id of every dense node id.
    pub fn with_external_ids(mut self, ids: Vec<String>) -> Result<Self> {
        if ids.len() != self.universe() {
            return Err(HoktError::input(
                "external id table does not match the universe",
            ));
        }
        self.external_ids = Some(ids);
        Ok(self)
    }

    pub fn universe(&self) -> usize {
        self.snapshots[0].universe()
    }

    /// Number of timesteps `T`.
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn snapshots(&self) -> &[SnapshotGraph] {
        &self.snapshots
    }

    /// Snapshot at 1-based timestep `t`.
    pub fn snapshot(&self, t: usize) -> &SnapshotGraph {
        &self.snapshots[t - 1]
    }

    pub fn truth(&self) -> Option<&[Partition]> {
        self.truth.as_deref()
    }

    pub fn external_ids(&self) -> Option<&[String]> {
        self.external_ids.as_deref()
    }
}

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
        self.size.fill(1);
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Components of `graph`, or of `extra_edges` alone when given (the base
/// edges are then ignored). Labels are the smallest node id per component.
pub fn connected_components(
    graph: &SnapshotGraph,
    extra_edges: Option<&[(NodeId, NodeId)]>,
) -> Result<Partition> {
    let mut dsu = DisjointSet::new(graph.universe());
    let edges = extra_edges.unwrap_or(graph.edges());
    for &(u, v) in edges {
        if !graph.contains(u) || !graph.contains(v) {
            return Err(HoktError::input(format!(
                "edge ({u}, {v}) has an endpoint that is not a node of the graph"
            )));
        }
        dsu.union(u, v);
    }
    Ok(labels_from_sets(graph, &mut dsu))
}

/// Decode a locus-based genotype: components of the `(i, genes[i])` links.
pub(crate) fn decode_links(
    graph: &SnapshotGraph,
    genes: &[NodeId],
    dsu: &mut DisjointSet,
) -> Partition {
    dsu.reset();
    for &v in graph.nodes() {
        dsu.union(v, genes[v]);
    }
    labels_from_sets(graph, dsu)
}

fn labels_from_sets(graph: &SnapshotGraph, dsu: &mut DisjointSet) -> Partition {
    let mut root_label = vec![usize::MAX; graph.universe()];
    let mut labels = vec![None; graph.universe()];
    // nodes ascend, so the first member seen per root is the smallest
    for &v in graph.nodes() {
        let r = dsu.find(v);
        if root_label[r] == usize::MAX {
            root_label[r] = v;
        }
        labels[v] = Some(root_label[r]);
    }
    Partition { labels }
}

/// Nodes present in both snapshots, ascending.
pub fn shared_nodes(a: &SnapshotGraph, b: &SnapshotGraph) -> Vec<NodeId> {
    a.nodes()
        .iter()
        .copied()
        .filter(|&v| b.contains(v))
        .collect()
}
