//! Locus-based genetic representation and a two-objective NSGA-II engine.

mod genotype;
mod nsga2;

pub use genotype::{
    crossover_with_mask, init_population, mutate, mutate_one_gene, random_genotype,
    uniform_crossover, Genotype,
};
pub use nsga2::{
    binary_tournament, crowding_distance, fast_nondominated_sort, pick_solution, run_nsga2,
    run_nsga2_observed, Individual,
};

use serde::{Deserialize, Serialize};

use crate::error::{HoktError, Result};

/// Genetic-algorithm parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvoConfig {
    pub pop_size: usize,
    pub generations: usize,
    pub p_crossover: f64,
    pub p_mutation: f64,
    pub mutation: MutationScheme,
    pub seed: u64,
}

/// How `p_mutation` is applied to an offspring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationScheme {
    /// With probability `p_mutation`, one random gene is redrawn.
    #[default]
    PerIndividual,
    /// Every gene is redrawn independently with probability `p_mutation`.
    PerGene,
}

impl Default for EvoConfig {
    fn default() -> Self {
        EvoConfig {
            pop_size: 200,
            generations: 100,
            p_crossover: 0.8,
            p_mutation: 0.2,
            mutation: MutationScheme::PerIndividual,
            seed: 0,
        }
    }
}

impl EvoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 4 || !self.pop_size.is_multiple_of(2) {
            return Err(HoktError::config(format!(
                "population size must be even and at least 4, got {}",
                self.pop_size
            )));
        }
        for (name, p) in [
            ("crossover", self.p_crossover),
            ("mutation", self.p_mutation),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(HoktError::config(format!(
                    "{name} probability {p} is outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}
