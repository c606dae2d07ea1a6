//! Executes an [`EaProgram`] as a generational EA on a [`Problem`].

use rand::Rng;

use crate::error::{Error, Result};
use crate::par::{self, Parallelism};
use crate::program::{EaProgram, Opcode};
use crate::rng::derived_rng;

/// An optimisation domain the evolved EAs can run on. Minimisation.
///
/// `evaluate` must be deterministic, and the variation operators must only
/// produce valid individuals.
pub trait Problem: Sync {
    type Individual: Clone + Send + Sync;

    fn random_individual<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Individual;

    fn evaluate(&self, individual: &Self::Individual) -> f64;

    fn crossover<R: Rng + ?Sized>(
        &self,
        first: &Self::Individual,
        second: &Self::Individual,
        rng: &mut R,
    ) -> Self::Individual;

    fn mutate<R: Rng + ?Sized>(&self, parent: &Self::Individual, rng: &mut R) -> Self::Individual;
}

#[derive(Clone, Debug, PartialEq)]
pub struct MicroConfig {
    pub num_registers: usize,
    pub micro_generations: usize,
    pub runs_per_fitness: usize,
    /// Run `i` uses the stream `derived_rng(seed, [i])`.
    pub seed: u64,
    pub exec: Parallelism,
}

impl Default for MicroConfig {
    fn default() -> Self {
        MicroConfig {
            num_registers: 40,
            micro_generations: 100,
            runs_per_fitness: 500,
            seed: 0,
            exec: Parallelism::default(),
        }
    }
}

impl MicroConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_registers < 2 {
            return Err(Error::config(format!(
                "micro population needs at least 2 registers, got {}",
                self.num_registers
            )));
        }
        if self.runs_per_fitness == 0 {
            return Err(Error::config("runs_per_fitness must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace {
    /// Entry 0 is the initial population; entry `g` the best after generation `g`.
    pub best_per_generation: Vec<f64>,
    pub eval_count: usize,
    pub best_fitness: f64,
}

/// Number of instructions that create a new individual per generation.
pub fn evals_per_generation(program: &EaProgram) -> usize {
    program
        .instructions
        .iter()
        .filter(|i| i.op.creates_individual())
        .count()
}

pub fn execute_run<P, R>(
    program: &EaProgram,
    problem: &P,
    cfg: &MicroConfig,
    rng: &mut R,
) -> Result<RunTrace>
where
    P: Problem,
    R: Rng + ?Sized,
{
    if program.num_registers != cfg.num_registers {
        return Err(Error::config(format!(
            "program uses {} registers but the micro configuration has {}",
            program.num_registers, cfg.num_registers
        )));
    }
    program.validate()?;

    let mut registers: Vec<(P::Individual, f64)> = (0..cfg.num_registers)
        .map(|_| {
            let ind = problem.random_individual(rng);
            let fit = problem.evaluate(&ind);
            (ind, fit)
        })
        .collect();
    let mut eval_count = registers.len();
    let mut best = registers.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let mut best_per_generation = Vec::with_capacity(cfg.micro_generations + 1);
    best_per_generation.push(best);

    for _ in 0..cfg.micro_generations {
        for ins in &program.instructions {
            let stored = match ins.op {
                Opcode::Select => {
                    let (a, b) = (&registers[ins.src1], &registers[ins.src2]);
                    if b.1 < a.1 { b.clone() } else { a.clone() }
                }
                Opcode::Crossover => {
                    let child =
                        problem.crossover(&registers[ins.src1].0, &registers[ins.src2].0, rng);
                    let fit = problem.evaluate(&child);
                    eval_count += 1;
                    (child, fit)
                }
                Opcode::Mutate => {
                    let child = problem.mutate(&registers[ins.src1].0, rng);
                    let fit = problem.evaluate(&child);
                    eval_count += 1;
                    (child, fit)
                }
            };
            if stored.1 < best {
                best = stored.1;
            }
            registers[ins.dest] = stored;
        }
        best_per_generation.push(best);
    }

    Ok(RunTrace { best_per_generation, eval_count, best_fitness: best })
}

/// Best fitness of each of the `runs_per_fitness` independent runs, in run order.
pub fn run_bests<P: Problem>(program: &EaProgram, problem: &P, cfg: &MicroConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    par::try_map_indexed(cfg.runs_per_fitness, cfg.exec, |run| {
        let mut rng = derived_rng(cfg.seed, &[run as u64]);
        execute_run(program, problem, cfg, &mut rng).map(|t| t.best_fitness)
    })
}

/// Mean best fitness over `runs_per_fitness` runs.
pub fn program_fitness<P: Problem>(program: &EaProgram, problem: &P, cfg: &MicroConfig) -> Result<f64> {
    let bests = run_bests(program, problem, cfg)?;
    Ok(bests.iter().sum::<f64>() / bests.len() as f64)
}
