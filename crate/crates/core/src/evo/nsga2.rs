use std::cmp::Ordering;

use rand::Rng;

use crate::error::{HoktError, Result};
use crate::graph::{decode_links, DisjointSet, Partition, SnapshotGraph};
use crate::metrics::ObjectiveVector;

use super::genotype::{
    init_population, mutate_in_place, mutate_one_in_place, uniform_crossover, Genotype,
};
use super::{EvoConfig, MutationScheme};

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genotype: Genotype,
    /// Decoded communities, labelled by smallest member.
    pub phenotype: Partition,
    pub objectives: ObjectiveVector,
    pub rank: usize,
    pub crowding: f64,
}

/// Deb's fast non-dominated sort over maximised objective vectors.
///
/// Returns index lists, best front first; every index appears exactly once.
pub fn fast_nondominated_sort(objs: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let n = objs.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    let mut fronts: Vec<Vec<usize>> = Vec::new();

    for p in 0..n {
        for q in (p + 1)..n {
            if objs[p].dominates(&objs[q]) {
                dominated_by[p].push(q);
                domination_count[q] += 1;
            } else if objs[q].dominates(&objs[p]) {
                dominated_by[q].push(p);
                domination_count[p] += 1;
            }
        }
    }
    let mut current: Vec<usize> = (0..n).filter(|&p| domination_count[p] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominated_by[p] {
                domination_count[q] -= 1;
                if domination_count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Crowding distance of each member of one front.
///
/// Boundary points are infinite; interior points sum the normalised gap
/// between their neighbours on each objective. A constant objective adds 0.
pub fn crowding_distance(front_objs: &[ObjectiveVector]) -> Vec<f64> {
    let n = front_objs.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let getters: [fn(&ObjectiveVector) -> f64; 2] = [|o| o.q, |o| o.smooth];
    for get in getters {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| get(&front_objs[a]).total_cmp(&get(&front_objs[b])));
        let lo = get(&front_objs[order[0]]);
        let hi = get(&front_objs[order[n - 1]]);
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in 1..n - 1 {
            let gap = get(&front_objs[order[w + 1]]) - get(&front_objs[order[w - 1]]);
            dist[order[w]] += gap / range;
        }
    }
    dist
}

fn better(a: &Individual, b: &Individual) -> bool {
    a.rank < b.rank || (a.rank == b.rank && a.crowding > b.crowding)
}

/// Two uniform picks; lower rank wins, then larger crowding, then the first pick.
pub fn binary_tournament<'a, R: Rng + ?Sized>(
    pop: &'a [Individual],
    rng: &mut R,
) -> &'a Individual {
    let first = &pop[rng.gen_range(0..pop.len())];
    let second = &pop[rng.gen_range(0..pop.len())];
    if better(second, first) {
        second
    } else {
        first
    }
}

/// Highest modularity; ties go to the higher smoothness score, then to the
/// lexicographically smallest canonical label sequence.
pub fn pick_solution(front: &[Individual]) -> Result<&Individual> {
    front
        .iter()
        .max_by(|a, b| {
            a.objectives
                .q
                .total_cmp(&b.objectives.q)
                .then(a.objectives.smooth.total_cmp(&b.objectives.smooth))
                .then_with(|| b.phenotype.canonical().cmp(&a.phenotype.canonical()))
        })
        .ok_or_else(|| HoktError::internal("cannot pick a solution from an empty front"))
}

/// Assign rank and crowding to `pool` and keep the best `keep` members.
fn survivor_selection(pool: Vec<Individual>, keep: usize) -> Vec<Individual> {
    let objs: Vec<ObjectiveVector> = pool.iter().map(|i| i.objectives).collect();
    let fronts = fast_nondominated_sort(&objs);
    let mut slots: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
    let mut survivors = Vec::with_capacity(keep);
    for (rank, front) in fronts.iter().enumerate() {
        if survivors.len() >= keep {
            break;
        }
        let front_objs: Vec<ObjectiveVector> = front.iter().map(|&i| objs[i]).collect();
        let dist = crowding_distance(&front_objs);
        let mut members: Vec<Individual> = front
            .iter()
            .zip(dist)
            .map(|(&i, d)| {
                let mut ind = slots[i].take().expect("index appears in one front only");
                ind.rank = rank;
                ind.crowding = d;
                ind
            })
            .collect();
        let room = keep - survivors.len();
        if members.len() > room {
            members.sort_by(|a, b| {
                b.crowding
                    .partial_cmp(&a.crowding)
                    .unwrap_or(Ordering::Equal)
            });
            members.truncate(room);
        }
        survivors.extend(members);
    }
    survivors
}

struct Decoder<'g> {
    graph: &'g SnapshotGraph,
    dsu: DisjointSet,
}

impl<'g> Decoder<'g> {
    fn evaluate<F>(&mut self, genotype: Genotype, eval: &F) -> Result<Individual>
    where
        F: Fn(&Partition) -> Result<ObjectiveVector>,
    {
        let phenotype = decode_links(self.graph, &genotype.genes, &mut self.dsu);
        let objectives = eval(&phenotype)?;
        Ok(Individual {
            genotype,
            phenotype,
            objectives,
            rank: 0,
            crowding: 0.0,
        })
    }
}

/// Run the (mu + lambda) NSGA-II loop and return the final non-dominated set.
///
/// `eval` scores a decoded partition; it must be deterministic.
pub fn run_nsga2<F, R>(
    graph: &SnapshotGraph,
    eval: F,
    cfg: &EvoConfig,
    rng: &mut R,
) -> Result<Vec<Individual>>
where
    F: Fn(&Partition) -> Result<ObjectiveVector>,
    R: Rng + ?Sized,
{
    run_nsga2_observed(graph, eval, cfg, rng, |_, _| {})
}

/// [`run_nsga2`] with a callback receiving each generation's population
/// (generation 0 is the initial population).
pub fn run_nsga2_observed<F, R, O>(
    graph: &SnapshotGraph,
    eval: F,
    cfg: &EvoConfig,
    rng: &mut R,
    mut observe: O,
) -> Result<Vec<Individual>>
where
    F: Fn(&Partition) -> Result<ObjectiveVector>,
    R: Rng + ?Sized,
    O: FnMut(usize, &[Individual]),
{
    cfg.validate()?;
    if graph.node_count() == 0 {
        return Err(HoktError::input("cannot optimise an empty graph"));
    }
    let mut decoder = Decoder {
        graph,
        dsu: DisjointSet::new(graph.universe()),
    };

    let movable: Vec<usize> = graph
        .nodes()
        .iter()
        .copied()
        .filter(|&v| graph.degree(v) >= 2)
        .collect();
    let initial = init_population(graph, cfg, rng)
        .into_iter()
        .map(|g| decoder.evaluate(g, &eval))
        .collect::<Result<Vec<_>>>()?;
    let mut population = survivor_selection(initial, cfg.pop_size);
    observe(0, &population);

    for generation in 1..=cfg.generations {
        let mut offspring = Vec::with_capacity(cfg.pop_size);
        for _ in 0..cfg.pop_size {
            let first = binary_tournament(&population, rng);
            let second = binary_tournament(&population, rng);
            let mut child = if rng.gen_bool(cfg.p_crossover) {
                uniform_crossover(&first.genotype, &second.genotype, rng)?
            } else {
                first.genotype.clone()
            };
            match cfg.mutation {
                MutationScheme::PerIndividual => {
                    mutate_one_in_place(&mut child, graph, &movable, cfg.p_mutation, rng)
                }
                MutationScheme::PerGene => mutate_in_place(&mut child, graph, cfg.p_mutation, rng),
            }
            offspring.push(decoder.evaluate(child, &eval)?);
        }
        let mut pool = population;
        pool.extend(offspring);
        population = survivor_selection(pool, cfg.pop_size);
        observe(generation, &population);
    }

    Ok(population.into_iter().filter(|i| i.rank == 0).collect())
}
