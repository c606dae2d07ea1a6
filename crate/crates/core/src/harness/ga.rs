//! The generational, non-elitist standard GA used as the baseline: binary
//! tournament parents, one crossover child per slot, mutation, wholesale
//! population replacement.

use rand::Rng;

use crate::error::{Error, Result};
use crate::interp::{Problem, RunTrace};
use crate::lgp::binary_tournament;

#[derive(Clone, Debug, PartialEq)]
pub struct GaConfig {
    pub pop_size: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig { pop_size: 20, generations: 100, crossover_prob: 1.0, mutation_prob: 1.0, seed: 0 }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 2 {
            return Err(Error::config(format!("GA population must be >= 2, got {}", self.pop_size)));
        }
        for (name, p) in [("crossover_prob", self.crossover_prob), ("mutation_prob", self.mutation_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        Ok(())
    }
}

/// One run of the standard GA. Evaluates `pop_size` individuals per
/// generation plus the initial population; reports the best ever seen.
pub fn standard_ga_run<P, R>(problem: &P, cfg: &GaConfig, rng: &mut R) -> Result<RunTrace>
where
    P: Problem,
    R: Rng + ?Sized,
{
    cfg.validate()?;
    let mut population: Vec<P::Individual> =
        (0..cfg.pop_size).map(|_| problem.random_individual(rng)).collect();
    let mut fitnesses: Vec<f64> = population.iter().map(|i| problem.evaluate(i)).collect();
    let mut eval_count = cfg.pop_size;
    let mut best = fitnesses.iter().copied().fold(f64::INFINITY, f64::min);
    let mut best_per_generation = Vec::with_capacity(cfg.generations + 1);
    best_per_generation.push(best);

    for _ in 0..cfg.generations {
        let mut next = Vec::with_capacity(cfg.pop_size);
        let mut next_fit = Vec::with_capacity(cfg.pop_size);
        for _ in 0..cfg.pop_size {
            let p1 = binary_tournament(&fitnesses, rng)?;
            let p2 = binary_tournament(&fitnesses, rng)?;
            let mut child = if rng.random_bool(cfg.crossover_prob) {
                problem.crossover(&population[p1], &population[p2], rng)
            } else {
                population[p1].clone()
            };
            if rng.random_bool(cfg.mutation_prob) {
                child = problem.mutate(&child, rng);
            }
            let f = problem.evaluate(&child);
            eval_count += 1;
            best = best.min(f);
            next.push(child);
            next_fit.push(f);
        }
        population = next;
        fitnesses = next_fit;
        best_per_generation.push(best);
    }

    Ok(RunTrace { best_per_generation, eval_count, best_fitness: best })
}
