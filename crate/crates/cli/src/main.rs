use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eea_core::commands::{self, BenchArgs, RunArgs};
use eea_core::config::ExperimentConfig;
use eea_core::{Error, Parallelism};

#[derive(Parser)]
#[command(name = "eea", version, about = "Evolve evolutionary algorithms with linear genetic programming")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Shared {
    /// Master random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for fitness evaluation (default: all cores). Output does not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    /// Output location (a directory for `evolve`, a file otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve an EA program; writes best.eea and history.csv.
    Evolve {
        /// TOML experiment configuration; all keys optional.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        shared: Shared,
    },
    /// Execute a program on one problem and print best-fitness statistics.
    Run {
        program: PathBuf,
        /// f1..f10, a TSPLIB .tsp file, or a QAPLIB file.
        problem: String,
        #[arg(long, default_value_t = 30)]
        runs: usize,
        #[arg(long, default_value_t = 5)]
        dimension: usize,
        #[command(flatten)]
        shared: Shared,
    },
    /// Compare a program against the budget-matched standard GA on a list of problems.
    Bench {
        program: PathBuf,
        /// One problem token per line; `#` comments; paths relative to this file.
        list: PathBuf,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        #[arg(long, default_value_t = 5)]
        dimension: usize,
        #[command(flatten)]
        shared: Shared,
    },
    /// Print a program as pseudo-code.
    Render {
        program: PathBuf,
        #[command(flatten)]
        shared: Shared,
    },
}

impl Command {
    fn shared(&self) -> &Shared {
        match self {
            Command::Evolve { shared, .. }
            | Command::Run { shared, .. }
            | Command::Bench { shared, .. }
            | Command::Render { shared, .. } => shared,
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> eea_core::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(command: Command) -> eea_core::Result<()> {
    let shared = command.shared().clone();
    let seed = shared.seed.unwrap_or(0);
    let exec = Parallelism::default();
    match command {
        Command::Evolve { config, .. } => {
            let mut cfg = match &config {
                Some(path) => ExperimentConfig::from_file(path)?,
                None => ExperimentConfig::from_toml("", ".".as_ref())?,
            };
            if let Some(s) = shared.seed {
                cfg = cfg.with_seed(s);
            }
            let cfg = cfg.with_exec(exec);
            let out_dir = shared.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
            let per_gen = cfg.macro_cfg.attempts_per_generation();
            eprintln!("evolving on {} ({} attempts)", cfg.problem.name(), cfg.macro_cfg.attempts());
            let report = commands::cmd_evolve(&cfg, &out_dir, |attempt, best| {
                if attempt % per_gen == 0 {
                    eprintln!("generation {:>4}  best {best}", attempt / per_gen);
                }
            })?;
            eprintln!(
                "best fitness {}; wrote {} and {}",
                report.outcome.best_fitness,
                report.program_path.display(),
                report.history_path.display()
            );
        }
        Command::Run { program, problem, runs, dimension, .. } => {
            let report = commands::cmd_run(&RunArgs {
                program: &program,
                problem: &problem,
                dimension,
                runs,
                seed,
                exec,
                trace: shared.out.as_deref(),
            })?;
            print!("{}", report.render());
        }
        Command::Bench { program, list, runs, dimension, .. } => {
            let csv = commands::cmd_bench(
                &BenchArgs { program: &program, list: &list, dimension, runs, seed, exec },
                |token, e| eprintln!("error: {token}: {e}"),
            )?;
            emit(shared.out.as_ref(), &csv)?;
        }
        Command::Render { program, .. } => {
            emit(shared.out.as_ref(), &commands::cmd_render(&program)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli.command.shared().workers;
    if workers == Some(0) {
        eprintln!("error: --workers must be at least 1");
        return ExitCode::from(2);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers.unwrap_or(0)).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| execute(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
