use rand::Rng;

use crate::error::{HoktError, Result};
use crate::graph::{NodeId, SnapshotGraph};

use super::EvoConfig;

/// Locus-based chromosome: gene `i` names a neighbour of node `i`, and the
/// connected components of the `(i, genes[i])` links are the communities.
/// Isolated and absent nodes point at themselves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Genotype {
    pub genes: Vec<NodeId>,
}

impl Genotype {
    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    /// True when every gene is a neighbour of its node (or the node itself
    /// when it has none).
    pub fn is_valid_for(&self, graph: &SnapshotGraph) -> bool {
        self.genes.len() == graph.universe()
            && self.genes.iter().enumerate().all(|(v, &g)| {
                if graph.degree(v) == 0 {
                    g == v
                } else {
                    graph.has_edge(v, g)
                }
            })
    }

    /// The `(i, genes[i])` links of present nodes.
    pub fn links(&self, graph: &SnapshotGraph) -> Vec<(NodeId, NodeId)> {
        graph.nodes().iter().map(|&v| (v, self.genes[v])).collect()
    }
}

pub fn random_genotype<R: Rng + ?Sized>(graph: &SnapshotGraph, rng: &mut R) -> Genotype {
    let genes = (0..graph.universe())
        .map(|v| {
            let nbrs = graph.neighbors(v);
            if nbrs.is_empty() {
                v
            } else {
                nbrs[rng.gen_range(0..nbrs.len())]
            }
        })
        .collect();
    Genotype { genes }
}

/// `cfg.pop_size` genotypes, each gene drawn uniformly from its node's
/// neighbours.
pub fn init_population<R: Rng + ?Sized>(
    graph: &SnapshotGraph,
    cfg: &EvoConfig,
    rng: &mut R,
) -> Vec<Genotype> {
    (0..cfg.pop_size)
        .map(|_| random_genotype(graph, rng))
        .collect()
}

/// Child takes `p2`'s gene where `mask` is set and `p1`'s elsewhere.
pub fn crossover_with_mask(p1: &Genotype, p2: &Genotype, mask: &[bool]) -> Result<Genotype> {
    if p1.len() != p2.len() || mask.len() != p1.len() {
        return Err(HoktError::internal(format!(
            "crossover length mismatch: parents {} and {}, mask {}",
            p1.len(),
            p2.len(),
            mask.len()
        )));
    }
    let genes = p1
        .genes
        .iter()
        .zip(&p2.genes)
        .zip(mask)
        .map(|((&a, &b), &take_second)| if take_second { b } else { a })
        .collect();
    Ok(Genotype { genes })
}

/// Uniform crossover with a fresh random binary mask.
pub fn uniform_crossover<R: Rng + ?Sized>(
    p1: &Genotype,
    p2: &Genotype,
    rng: &mut R,
) -> Result<Genotype> {
    let mask: Vec<bool> = (0..p1.len()).map(|_| rng.gen::<bool>()).collect();
    crossover_with_mask(p1, p2, &mask)
}

/// Each gene of a node with at least two neighbours is, with probability
/// `p_mutation`, replaced by a different neighbour chosen uniformly.
pub fn mutate<R: Rng + ?Sized>(
    g: &Genotype,
    graph: &SnapshotGraph,
    p_mutation: f64,
    rng: &mut R,
) -> Genotype {
    let mut out = g.clone();
    mutate_in_place(&mut out, graph, p_mutation, rng);
    out
}

/// With probability `p_mutation`, redraw the gene of one uniformly chosen
/// node of degree at least two to a different neighbour.
pub fn mutate_one_gene<R: Rng + ?Sized>(
    g: &Genotype,
    graph: &SnapshotGraph,
    p_mutation: f64,
    rng: &mut R,
) -> Genotype {
    let mut out = g.clone();
    let movable: Vec<NodeId> = graph
        .nodes()
        .iter()
        .copied()
        .filter(|&v| graph.degree(v) >= 2)
        .collect();
    mutate_one_in_place(&mut out, graph, &movable, p_mutation, rng);
    out
}

pub(crate) fn mutate_one_in_place<R: Rng + ?Sized>(
    g: &mut Genotype,
    graph: &SnapshotGraph,
    movable: &[NodeId],
    p_mutation: f64,
    rng: &mut R,
) {
    if p_mutation <= 0.0 || movable.is_empty() || !rng.gen_bool(p_mutation) {
        return;
    }
    let v = movable[rng.gen_range(0..movable.len())];
    g.genes[v] = redraw(graph.neighbors(v), g.genes[v], rng);
}

fn redraw<R: Rng + ?Sized>(nbrs: &[NodeId], current: NodeId, rng: &mut R) -> NodeId {
    match nbrs.binary_search(&current) {
        Ok(pos) => {
            let k = rng.gen_range(0..nbrs.len() - 1);
            nbrs[if k >= pos { k + 1 } else { k }]
        }
        Err(_) => nbrs[rng.gen_range(0..nbrs.len())],
    }
}

pub(crate) fn mutate_in_place<R: Rng + ?Sized>(
    g: &mut Genotype,
    graph: &SnapshotGraph,
    p_mutation: f64,
    rng: &mut R,
) {
    if p_mutation <= 0.0 {
        return;
    }
    for &v in graph.nodes() {
        let nbrs = graph.neighbors(v);
        if nbrs.len() < 2 || !rng.gen_bool(p_mutation) {
            continue;
        }
        g.genes[v] = redraw(nbrs, g.genes[v], rng);
    }
}
