//! Macro-level steady-state search over [`EaProgram`]s.
//!
//! Each iteration picks two parents by binary tournament, recombines them
//! with uniform crossover (with probability `crossover_prob`, otherwise the
//! parents are copied), mutates both offspring and lets the better one
//! replace the worst member of the population if it is strictly better.
//! Fitness is minimised throughout.

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::par::{self, Parallelism};
use crate::program::{random_instruction, random_program, EaProgram};
use crate::rng::derived_rng;
use crate::text::to_text;

#[derive(Clone, Debug, PartialEq)]
pub struct MacroConfig {
    pub pop_size: usize,
    pub code_length: usize,
    /// Generation-equivalents; one equals `pop_size / 2` replacement attempts.
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutations_per_chromosome: usize,
    pub master_seed: u64,
    pub exec: Parallelism,
}

impl Default for MacroConfig {
    fn default() -> Self {
        MacroConfig {
            pop_size: 500,
            code_length: 80,
            generations: 100,
            crossover_prob: 0.7,
            mutations_per_chromosome: 5,
            master_seed: 0,
            exec: Parallelism::default(),
        }
    }
}

impl MacroConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 2 {
            return Err(Error::config(format!("macro pop_size must be >= 2, got {}", self.pop_size)));
        }
        if self.code_length == 0 {
            return Err(Error::config("code_length must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) {
            return Err(Error::config(format!(
                "crossover_prob must lie in [0, 1], got {}",
                self.crossover_prob
            )));
        }
        if self.mutations_per_chromosome > self.code_length {
            return Err(Error::config(format!(
                "{} mutations per chromosome exceed code length {}",
                self.mutations_per_chromosome, self.code_length
            )));
        }
        Ok(())
    }

    pub fn attempts_per_generation(&self) -> usize {
        (self.pop_size / 2).max(1)
    }

    /// Total number of offspring-insertion attempts in a run.
    pub fn attempts(&self) -> usize {
        self.generations * self.attempts_per_generation()
    }
}

/// Swaps the genes of `a` and `b` position-wise with probability 1/2.
pub fn uniform_crossover<R: Rng + ?Sized>(
    a: &EaProgram,
    b: &EaProgram,
    rng: &mut R,
) -> Result<(EaProgram, EaProgram)> {
    if a.len() != b.len() {
        return Err(Error::IncompatibleParents(format!(
            "program lengths differ ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if a.num_registers != b.num_registers {
        return Err(Error::IncompatibleParents(format!(
            "register counts differ ({} vs {})",
            a.num_registers, b.num_registers
        )));
    }
    let mut c1 = a.clone();
    let mut c2 = b.clone();
    for (x, y) in c1.instructions.iter_mut().zip(c2.instructions.iter_mut()) {
        if rng.random_bool(0.5) {
            std::mem::swap(x, y);
        }
    }
    Ok((c1, c2))
}

/// Redraws `k` distinct, uniformly chosen instructions.
pub fn mutate_program<R: Rng + ?Sized>(
    p: &EaProgram,
    k: usize,
    num_registers: usize,
    rng: &mut R,
) -> Result<EaProgram> {
    if k > p.len() {
        return Err(Error::config(format!(
            "cannot mutate {k} positions of a program of length {}",
            p.len()
        )));
    }
    let mut out = p.clone();
    for pos in index::sample(rng, p.len(), k) {
        out.instructions[pos] = random_instruction(num_registers, rng)?;
    }
    Ok(out)
}

pub(crate) fn tournament_winner(fitnesses: &[f64], first: usize, second: usize) -> usize {
    if fitnesses[second] < fitnesses[first] {
        second
    } else {
        first
    }
}

/// Draws two indices (possibly equal) and returns the fitter; ties go to the
/// first draw.
pub fn binary_tournament<R: Rng + ?Sized>(fitnesses: &[f64], rng: &mut R) -> Result<usize> {
    if fitnesses.len() < 2 {
        return Err(Error::config(format!(
            "binary tournament needs at least 2 individuals, got {}",
            fitnesses.len()
        )));
    }
    let first = rng.random_range(0..fitnesses.len());
    let second = rng.random_range(0..fitnesses.len());
    Ok(tournament_winner(fitnesses, first, second))
}

fn worst_index(fitnesses: &[f64]) -> usize {
    let mut worst = 0;
    for (i, &f) in fitnesses.iter().enumerate().skip(1) {
        if f > fitnesses[worst] {
            worst = i;
        }
    }
    worst
}

fn best_index(fitnesses: &[f64]) -> usize {
    let mut best = 0;
    for (i, &f) in fitnesses.iter().enumerate().skip(1) {
        if f < fitnesses[best] {
            best = i;
        }
    }
    best
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub best: EaProgram,
    pub best_fitness: f64,
    /// `history[0]` is the initial population best; `history[t]` the best after
    /// `t` replacement attempts.
    pub history: Vec<f64>,
    /// Final population, in slot order.
    pub population: Vec<(EaProgram, f64)>,
}

fn evaluate<F>(fitness_fn: &F, program: &EaProgram) -> Result<f64>
where
    F: Fn(&EaProgram) -> Result<f64> + Sync,
{
    fitness_fn(program).map_err(|e| Error::Fitness {
        program: to_text(program),
        source: Box::new(e),
    })
}

pub fn steady_state_search<F>(
    cfg: &MacroConfig,
    num_registers: usize,
    micro_generations: usize,
    fitness_fn: F,
) -> Result<SearchOutcome>
where
    F: Fn(&EaProgram) -> Result<f64> + Sync,
{
    steady_state_search_with_progress(cfg, num_registers, micro_generations, fitness_fn, |_, _| {})
}

/// [`steady_state_search`] with a callback invoked after every attempt with
/// `(attempt, best_fitness)`.
pub fn steady_state_search_with_progress<F, P>(
    cfg: &MacroConfig,
    num_registers: usize,
    micro_generations: usize,
    fitness_fn: F,
    mut progress: P,
) -> Result<SearchOutcome>
where
    F: Fn(&EaProgram) -> Result<f64> + Sync,
    P: FnMut(usize, f64),
{
    cfg.validate()?;
    let mut rng = derived_rng(cfg.master_seed, &[0x006d_6163_726f]);

    let mut programs = (0..cfg.pop_size)
        .map(|_| random_program(cfg.code_length, num_registers, micro_generations, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let mut fitnesses =
        par::try_map_indexed(programs.len(), cfg.exec, |i| evaluate(&fitness_fn, &programs[i]))?;

    let attempts = cfg.attempts();
    let mut history = Vec::with_capacity(attempts + 1);
    let mut best_slot = best_index(&fitnesses);
    let mut best = programs[best_slot].clone();
    let mut best_fitness = fitnesses[best_slot];
    history.push(best_fitness);

    for attempt in 1..=attempts {
        let p1 = binary_tournament(&fitnesses, &mut rng)?;
        let p2 = binary_tournament(&fitnesses, &mut rng)?;
        let (o1, o2) = if rng.random_bool(cfg.crossover_prob) {
            uniform_crossover(&programs[p1], &programs[p2], &mut rng)?
        } else {
            (programs[p1].clone(), programs[p2].clone())
        };
        let k = cfg.mutations_per_chromosome;
        let o1 = mutate_program(&o1, k, num_registers, &mut rng)?;
        let o2 = mutate_program(&o2, k, num_registers, &mut rng)?;

        let (f1, f2) = par::join(
            cfg.exec,
            || evaluate(&fitness_fn, &o1),
            || evaluate(&fitness_fn, &o2),
        );
        let (f1, f2) = (f1?, f2?);
        let (child, child_fitness) = if f2 < f1 { (o2, f2) } else { (o1, f1) };

        let worst = worst_index(&fitnesses);
        if child_fitness < fitnesses[worst] {
            programs[worst] = child;
            fitnesses[worst] = child_fitness;
            if child_fitness < best_fitness {
                best_slot = worst;
                best = programs[best_slot].clone();
                best_fitness = child_fitness;
            }
        }
        history.push(best_fitness);
        progress(attempt, best_fitness);
    }

    Ok(SearchOutcome {
        best,
        best_fitness,
        history,
        population: programs.into_iter().zip(fitnesses).collect(),
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::program::{Instruction, Opcode};
    use crate::rng::rng_from_seed;
    use rand::RngCore;

    /// Returns the same word forever.
    pub(crate) struct ConstRng(pub u64);

    impl RngCore for ConstRng {
        fn next_u32(&mut self) -> u32 {
            self.0 as u32
        }
        fn next_u64(&mut self) -> u64 {
            self.0
        }
        fn fill_bytes(&mut self, dst: &mut [u8]) {
            for (i, b) in dst.iter_mut().enumerate() {
                *b = self.0.to_le_bytes()[i % 8];
            }
        }
    }

    fn prog(seed: u64, len: usize) -> EaProgram {
        random_program(len, 8, 10, &mut rng_from_seed(seed)).unwrap()
    }

    #[test]
    fn crossover_of_identical_parents() {
        let a = prog(1, 30);
        let (c1, c2) = uniform_crossover(&a, &a, &mut rng_from_seed(5)).unwrap();
        assert_eq!(c1, a);
        assert_eq!(c2, a);
    }

    #[test]
    fn crossover_forced_keep_and_swap() {
        let a = prog(1, 30);
        let b = prog(2, 30);
        // random_bool(0.5) is true for the all-zero word and false for all-ones.
        let (k1, k2) = uniform_crossover(&a, &b, &mut ConstRng(u64::MAX)).unwrap();
        assert_eq!((k1, k2), (a.clone(), b.clone()));
        let (s1, s2) = uniform_crossover(&a, &b, &mut ConstRng(0)).unwrap();
        assert_eq!((s1, s2), (b, a));
    }

    #[test]
    fn crossover_rejects_length_mismatch() {
        let err = uniform_crossover(&prog(1, 10), &prog(2, 11), &mut rng_from_seed(0)).unwrap_err();
        assert!(matches!(err, Error::IncompatibleParents(_)));
    }

    #[test]
    fn crossover_is_positionwise() {
        let a = prog(3, 50);
        let b = prog(4, 50);
        let (c1, c2) = uniform_crossover(&a, &b, &mut rng_from_seed(6)).unwrap();
        for i in 0..50 {
            let pair = (c1.instructions[i], c2.instructions[i]);
            let keep = (a.instructions[i], b.instructions[i]);
            let swap = (b.instructions[i], a.instructions[i]);
            assert!(pair == keep || pair == swap);
        }
    }

    #[test]
    fn mutation_counts() {
        let p = prog(7, 80);
        let mut rng = rng_from_seed(8);
        assert_eq!(mutate_program(&p, 0, 8, &mut rng).unwrap(), p);
        for _ in 0..100 {
            let m = mutate_program(&p, 5, 8, &mut rng).unwrap();
            let diff = p.instructions.iter().zip(&m.instructions).filter(|(a, b)| a != b).count();
            assert!(diff <= 5);
            assert_eq!(m.len(), 80);
        }
        let all = mutate_program(&p, 80, 8, &mut rng).unwrap();
        all.validate().unwrap();
        assert!(matches!(
            mutate_program(&p, 81, 8, &mut rng),
            Err(Error::InvalidConfiguration(_))
        ));
    }

    #[test]
    fn tournament_rules() {
        assert_eq!(tournament_winner(&[1.0, 2.0], 0, 1), 0);
        assert_eq!(tournament_winner(&[1.0, 2.0], 1, 0), 0);
        assert_eq!(tournament_winner(&[1.0, 2.0], 1, 1), 1);
        assert_eq!(tournament_winner(&[3.0, 3.0], 0, 1), 0);
        assert_eq!(tournament_winner(&[3.0, 3.0], 1, 0), 1);
        assert!(binary_tournament(&[1.0], &mut rng_from_seed(0)).is_err());
        assert!(binary_tournament(&[], &mut rng_from_seed(0)).is_err());
        let mut rng = rng_from_seed(1);
        for _ in 0..100 {
            assert!(binary_tournament(&[5.0, 1.0, 3.0], &mut rng).unwrap() < 3);
        }
    }

    fn small_cfg(seed: u64) -> MacroConfig {
        MacroConfig {
            pop_size: 10,
            code_length: 10,
            generations: 40, // 40 * 5 = 200 attempts
            crossover_prob: 0.7,
            mutations_per_chromosome: 2,
            master_seed: seed,
            exec: Parallelism::Sequential,
        }
    }

    fn count_selects(p: &EaProgram) -> Result<f64> {
        Ok(p.instructions.iter().filter(|i| i.op == Opcode::Select).count() as f64)
    }

    #[test]
    fn constant_fitness_never_replaces() {
        let cfg = small_cfg(11);
        let mut rng = derived_rng(cfg.master_seed, &[0x006d_6163_726f]);
        let initial: Vec<EaProgram> = (0..cfg.pop_size)
            .map(|_| random_program(cfg.code_length, 8, 10, &mut rng).unwrap())
            .collect();
        let out = steady_state_search(&cfg, 8, 10, |_| Ok(1.0)).unwrap();
        let fin: Vec<EaProgram> = out.population.into_iter().map(|(p, _)| p).collect();
        assert_eq!(fin, initial);
        assert!(out.history.iter().all(|&h| h == 1.0));
    }

    /// Direct simulation of the replacement rule on the select-count
    /// objective: replays the same search and re-derives the population best
    /// from the final population it reports.
    #[test]
    fn select_count_history_is_monotone() {
        let cfg = small_cfg(12);
        let out = steady_state_search(&cfg, 8, 10, count_selects).unwrap();
        assert_eq!(out.history.len(), 201);
        assert!(out.history.windows(2).all(|w| w[1] <= w[0]));
        assert!(out.history.last().unwrap() <= &out.history[0]);
        let pop_best = out
            .population
            .iter()
            .map(|(p, _)| count_selects(p).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert_eq!(pop_best, out.best_fitness);
        assert_eq!(count_selects(&out.best).unwrap(), out.best_fitness);
        for (p, f) in &out.population {
            assert_eq!(count_selects(p).unwrap(), *f);
            assert_eq!(p.len(), 10);
            p.validate().unwrap();
        }
    }

    #[test]
    fn search_is_deterministic_across_modes() {
        let mut cfg = small_cfg(13);
        let a = steady_state_search(&cfg, 8, 10, count_selects).unwrap();
        cfg.exec = Parallelism::Parallel;
        let b = steady_state_search(&cfg, 8, 10, count_selects).unwrap();
        assert_eq!(a.best, b.best);
        assert_eq!(a.history, b.history);
    }

    #[test]
    fn fitness_errors_carry_the_program() {
        let cfg = small_cfg(14);
        let err = steady_state_search(&cfg, 8, 10, |_| Err(Error::InvalidInput("boom".into())))
            .unwrap_err();
        match err {
            Error::Fitness { program, .. } => assert!(program.starts_with("EEA v1")),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn macro_config_validation() {
        assert!(MacroConfig { pop_size: 1, ..MacroConfig::default() }.validate().is_err());
        assert!(MacroConfig { crossover_prob: 1.5, ..MacroConfig::default() }.validate().is_err());
        assert!(MacroConfig { code_length: 0, ..MacroConfig::default() }.validate().is_err());
        let d = MacroConfig::default();
        assert_eq!((d.pop_size, d.code_length, d.generations), (500, 80, 100));
        assert_eq!(d.mutations_per_chromosome, 5);
        assert_eq!(d.crossover_prob, 0.7);
        let _ = Instruction::mutate(0, 0);
    }
}
