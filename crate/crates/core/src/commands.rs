//! The four user-facing operations. Each returns or writes deterministic
//! data; progress goes through caller-supplied callbacks.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::{ExperimentConfig, ProblemSpec};
use crate::error::{Error, Result};
use crate::harness::compare::{comparison_row, to_csv, CompareConfig, ComparisonRow};
use crate::harness::stats::{summarize, SampleStats};
use crate::interp::{execute_run, program_fitness, MicroConfig, RunTrace};
use crate::lgp::{steady_state_search_with_progress, SearchOutcome};
use crate::par::{self, Parallelism};
use crate::program::EaProgram;
use crate::rng::derived_rng;
use crate::text::{parse_program, render_pseudocode, to_text};
use crate::with_problem;

pub const PROGRAM_FILE: &str = "best.eea";
pub const HISTORY_FILE: &str = "history.csv";

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn load_program(path: &Path) -> Result<EaProgram> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_program(&text).map_err(|e| e.tagged(path.display().to_string()))
}

/// Runs the macro search on the configured problem. `progress` sees every
/// replacement attempt and the best fitness so far.
pub fn evolve(cfg: &ExperimentConfig, progress: impl FnMut(usize, f64)) -> Result<SearchOutcome> {
    let micro = &cfg.micro;
    with_problem!(&cfg.problem, p => steady_state_search_with_progress(
        &cfg.macro_cfg,
        micro.num_registers,
        micro.micro_generations,
        |program| program_fitness(program, p, micro),
        progress,
    ))
}

pub fn history_csv(history: &[f64]) -> String {
    let mut out = String::from("attempt,best_fitness\n");
    for (i, f) in history.iter().enumerate() {
        let _ = writeln!(out, "{i},{f}");
    }
    out
}

#[derive(Clone, Debug)]
pub struct EvolveReport {
    pub program_path: PathBuf,
    pub history_path: PathBuf,
    pub outcome: SearchOutcome,
}

/// Evolves a program and writes it plus the history CSV into `out_dir`.
pub fn cmd_evolve(cfg: &ExperimentConfig, out_dir: &Path, progress: impl FnMut(usize, f64)) -> Result<EvolveReport> {
    let outcome = evolve(cfg, progress)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let program_path = out_dir.join(PROGRAM_FILE);
    let history_path = out_dir.join(HISTORY_FILE);
    write(&program_path, &to_text(&outcome.best))?;
    write(&history_path, &history_csv(&outcome.history))?;
    Ok(EvolveReport { program_path, history_path, outcome })
}

/// `runs` independent executions; run `i` uses `derived_rng(seed, [i])`.
pub fn run_program(
    program: &EaProgram,
    problem: &ProblemSpec,
    runs: usize,
    seed: u64,
    exec: Parallelism,
) -> Result<Vec<RunTrace>> {
    let micro = MicroConfig {
        num_registers: program.num_registers,
        micro_generations: program.micro_generations,
        runs_per_fitness: runs,
        seed,
        exec,
    };
    micro.validate()?;
    with_problem!(problem, p => par::try_map_indexed(runs, exec, |run| {
        execute_run(program, p, &micro, &mut derived_rng(seed, &[run as u64]))
    }))
}

pub fn trace_csv(traces: &[RunTrace]) -> String {
    let mut out = String::from("run,generation,best_fitness\n");
    for (run, t) in traces.iter().enumerate() {
        for (g, f) in t.best_per_generation.iter().enumerate() {
            let _ = writeln!(out, "{run},{g},{f}");
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub problem: String,
    pub stats: SampleStats,
    pub traces: Vec<RunTrace>,
}

impl RunReport {
    pub fn render(&self) -> String {
        format!(
            "problem {}\nruns {}\nmean {}\nstddev {}\nevaluations_per_run {}\n",
            self.problem,
            self.stats.count,
            self.stats.mean,
            self.stats.stddev,
            self.traces.first().map_or(0, |t| t.eval_count),
        )
    }
}

#[derive(Clone, Debug)]
pub struct RunArgs<'a> {
    pub program: &'a Path,
    pub problem: &'a str,
    pub dimension: usize,
    pub runs: usize,
    pub seed: u64,
    pub exec: Parallelism,
    pub trace: Option<&'a Path>,
}

pub fn cmd_run(args: &RunArgs<'_>) -> Result<RunReport> {
    let program = load_program(args.program)?;
    let problem = ProblemSpec::from_token(args.problem, args.dimension, Path::new("."))?;
    let traces = run_program(&program, &problem, args.runs, args.seed, args.exec)?;
    let bests: Vec<f64> = traces.iter().map(|t| t.best_fitness).collect();
    let stats = summarize(&bests)?;
    if let Some(path) = args.trace {
        write(path, &trace_csv(&traces))?;
    }
    Ok(RunReport { problem: problem.name(), stats, traces })
}

/// Problem-list entries: one token per line, `#` starts a comment.
pub fn parse_problem_list(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect()
}

#[derive(Clone, Debug)]
pub struct BenchArgs<'a> {
    pub program: &'a Path,
    pub list: &'a Path,
    pub dimension: usize,
    pub runs: usize,
    pub seed: u64,
    pub exec: Parallelism,
}

/// Compares the program with the matched GA on every listed problem. A
/// failing entry becomes an error row (and is passed to `on_error`); the
/// remaining entries still run.
pub fn cmd_bench(args: &BenchArgs<'_>, mut on_error: impl FnMut(&str, &Error)) -> Result<String> {
    let program = load_program(args.program)?;
    let text = std::fs::read_to_string(args.list).map_err(|e| Error::io(args.list, e))?;
    let base = args.list.parent().unwrap_or(Path::new("."));
    let cfg = CompareConfig { runs: args.runs, seed: args.seed, exec: args.exec };
    let entries = parse_problem_list(&text);
    let rows: Vec<(String, Result<ComparisonRow>)> = entries
        .iter()
        .enumerate()
        .map(|(i, token)| {
            let row = ProblemSpec::from_token(token, args.dimension, base).and_then(|spec| {
                let name = spec.name();
                with_problem!(&spec, p => comparison_row(&name, p, &program, i as u64, &cfg))
            });
            let label = match &row {
                Ok(r) => r.problem.clone(),
                Err(e) => {
                    on_error(token, e);
                    token.clone()
                }
            };
            (label, row)
        })
        .collect();
    Ok(to_csv(rows.iter().map(|(n, r)| (n.as_str(), r))))
}

pub fn cmd_render(program: &Path) -> Result<String> {
    load_program(program).map(|p| render_pseudocode(&p))
}
