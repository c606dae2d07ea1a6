//! Evolved EA versus standard GA on a list of problems, with the results
//! written as CSV.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::harness::ga::{standard_ga_run, GaConfig};
use crate::harness::stats::{summarize, SampleStats};
use crate::interp::{evals_per_generation, execute_run, MicroConfig, Problem};
use crate::par::{self, Parallelism};
use crate::program::EaProgram;
use crate::rng::derived_rng;

pub const CSV_HEADER: &str = "problem,alg,runs,mean,stddev,delta_percent";

/// The GA population that matches the evolved EA's evaluations per generation.
pub fn match_budget(program: &EaProgram) -> usize {
    evals_per_generation(program)
}

/// Relative improvement of the evolved EA over the baseline, in percent.
pub fn delta_percent(baseline_mean: f64, evolved_mean: f64) -> Result<f64> {
    if evolved_mean == 0.0 {
        return Err(Error::UndefinedDelta);
    }
    Ok((baseline_mean - evolved_mean) / evolved_mean * 100.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub problem: String,
    pub baseline: SampleStats,
    pub evolved: SampleStats,
    /// `None` when the evolved mean is exactly zero.
    pub delta_percent: Option<f64>,
    pub baseline_samples: Vec<f64>,
    pub evolved_samples: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareConfig {
    pub runs: usize,
    pub seed: u64,
    pub exec: Parallelism,
}

/// Runs both algorithms `runs` times on one problem. `problem_index` only
/// separates the random streams of different problems.
pub fn comparison_row<P: Problem>(
    name: &str,
    problem: &P,
    program: &EaProgram,
    problem_index: u64,
    cfg: &CompareConfig,
) -> Result<ComparisonRow> {
    if cfg.runs < 2 {
        return Err(Error::InsufficientData(format!("need at least 2 runs, got {}", cfg.runs)));
    }
    let budget = match_budget(program);
    let ga = GaConfig { pop_size: budget, generations: program.micro_generations, seed: cfg.seed, ..GaConfig::default() };
    if budget < 2 {
        return Err(Error::config(format!(
            "program creates {budget} individual(s) per generation; the matched GA needs at least 2"
        )));
    }
    let micro = MicroConfig {
        num_registers: program.num_registers,
        micro_generations: program.micro_generations,
        runs_per_fitness: cfg.runs,
        seed: cfg.seed,
        exec: cfg.exec,
    };
    let evolved_samples = par::try_map_indexed(cfg.runs, cfg.exec, |run| {
        let mut rng = derived_rng(cfg.seed, &[problem_index, 0, run as u64]);
        execute_run(program, problem, &micro, &mut rng).map(|t| t.best_fitness)
    })?;
    let baseline_samples = par::try_map_indexed(cfg.runs, cfg.exec, |run| {
        let mut rng = derived_rng(cfg.seed, &[problem_index, 1, run as u64]);
        standard_ga_run(problem, &ga, &mut rng).map(|t| t.best_fitness)
    })?;
    let baseline = summarize(&baseline_samples)?;
    let evolved = summarize(&evolved_samples)?;
    Ok(ComparisonRow {
        problem: name.to_string(),
        baseline,
        evolved,
        delta_percent: delta_percent(baseline.mean, evolved.mean).ok(),
        baseline_samples,
        evolved_samples,
    })
}

/// `%g`-like formatting with six significant digits.
pub fn fmt_g6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.5e}");
        let (mantissa, e) = s.split_once('e').unwrap_or((&s, "0"));
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{e}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One problem's CSV lines, or an error line when the problem failed.
pub fn csv_lines(name: &str, row: &Result<ComparisonRow>) -> String {
    let name = csv_field(name);
    let mut out = String::new();
    match row {
        Ok(r) => {
            for (alg, s) in [("standard_ga", &r.baseline), ("evolved_ea", &r.evolved)] {
                let _ = writeln!(out, "{name},{alg},{},{},{},", s.count, fmt_g6(s.mean), fmt_g6(s.stddev));
            }
            let delta = r.delta_percent.map(|d| format!("{d:.2}")).unwrap_or_default();
            let _ = writeln!(out, "{name},delta,{},,,{delta}", r.evolved.count);
        }
        Err(_) => {
            let _ = writeln!(out, "{name},error,0,,,");
        }
    }
    out
}

pub fn to_csv<'a>(rows: impl IntoIterator<Item = (&'a str, &'a Result<ComparisonRow>)>) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for (name, row) in rows {
        out.push_str(&csv_lines(name, row));
    }
    out
}
