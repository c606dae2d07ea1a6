//! Experiment configuration: a TOML file with `[macro]`, `[micro]`,
//! `[problem]` and `[output]` sections. Every key is optional; missing keys
//! take per-problem defaults and unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::interp::MicroConfig;
use crate::lgp::MacroConfig;
use crate::par::Parallelism;
use crate::problems::qap::{parse_qaplib, QapInstance, QapProblem};
use crate::problems::real::{FunctionId, RealDomain, RealProblem};
use crate::problems::tsp::{parse_tsplib, TspInstance, TspProblem};

pub const ATT48: &str = include_str!("../data/att48.tsp");
pub const BERLIN52: &str = include_str!("../data/berlin52.tsp");
pub const HAD12: &str = include_str!("../data/had12.dat");

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    #[serde(rename = "macro", default)]
    macro_: RawMacro,
    #[serde(default)]
    micro: RawMicro,
    #[serde(default)]
    problem: RawProblem,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMacro {
    pop_size: Option<usize>,
    code_length: Option<usize>,
    generations: Option<usize>,
    crossover_prob: Option<f64>,
    mutations_per_chromosome: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMicro {
    num_registers: Option<usize>,
    micro_generations: Option<usize>,
    runs_per_fitness: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    kind: Option<String>,
    function: Option<String>,
    dimension: Option<usize>,
    min_x: Option<f64>,
    max_x: Option<f64>,
    sigma: Option<f64>,
    f5_abs: Option<bool>,
    file: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
}

/// A loaded training or test problem.
#[derive(Clone, Debug)]
pub enum ProblemSpec {
    Function(RealProblem),
    Tsp(TspProblem),
    Qap(QapProblem),
}

impl ProblemSpec {
    pub fn name(&self) -> String {
        match self {
            ProblemSpec::Function(p) => p.function.to_string(),
            ProblemSpec::Tsp(p) => p.instance.name().to_string(),
            ProblemSpec::Qap(p) => p.instance.name.clone(),
        }
    }

    /// Loads a problem from a command-line token: `f1`..`f10` (dimension
    /// `n`, default domain), a `.tsp` file, or any other path as QAPLIB.
    pub fn from_token(token: &str, n: usize, base: &Path) -> Result<ProblemSpec> {
        if let Ok(fid) = token.parse::<FunctionId>() {
            return Ok(ProblemSpec::Function(RealProblem::new(fid, n)?));
        }
        let path = base.join(token);
        let is_tsp = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("tsp"));
        if is_tsp {
            load_tsp(&path).map(ProblemSpec::Tsp)
        } else {
            load_qap(&path).map(ProblemSpec::Qap)
        }
    }
}

/// Evaluates `$body` with `$p` bound to the concrete problem inside `$spec`.
#[macro_export]
macro_rules! with_problem {
    ($spec:expr, $p:ident => $body:expr) => {
        match $spec {
            $crate::config::ProblemSpec::Function($p) => $body,
            $crate::config::ProblemSpec::Tsp($p) => $body,
            $crate::config::ProblemSpec::Qap($p) => $body,
        }
    };
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn load_tsp(path: &Path) -> Result<TspProblem> {
    let text = read(path)?;
    let inst = parse_tsplib(&text).map_err(|e| e.tagged(path.display().to_string()))?;
    TspProblem::new(inst)
}

pub fn load_qap(path: &Path) -> Result<QapProblem> {
    let text = read(path)?;
    let inst = parse_qaplib(&stem(path), &text).map_err(|e| e.tagged(path.display().to_string()))?;
    QapProblem::new(inst)
}

pub fn default_tsp() -> TspInstance {
    parse_tsplib(ATT48).expect("embedded att48 parses")
}

pub fn default_qap() -> QapInstance {
    parse_qaplib("had12", HAD12).expect("embedded had12 parses")
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub macro_cfg: MacroConfig,
    pub micro: MicroConfig,
    pub problem: ProblemSpec,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Parses configuration text; relative problem files resolve against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| text[..s.start].lines().count().max(1)).unwrap_or(0);
            Error::Parse { line, message: e.message().to_string() }
        })?;
        Self::resolve(raw, base)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = read(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&text, base).map_err(|e| e.tagged(path.display().to_string()))
    }

    fn resolve(raw: RawConfig, base: &Path) -> Result<Self> {
        let p = raw.problem;
        let kind = p.kind.as_deref().unwrap_or("function");
        let combinatorial = kind != "function";
        let reject = |present: bool, key: &str| {
            if present {
                Err(Error::config(format!("problem key `{key}` does not apply to kind `{kind}`")))
            } else {
                Ok(())
            }
        };
        let problem = match kind {
            "function" => {
                reject(p.file.is_some(), "file")?;
                let fid: FunctionId = p.function.as_deref().unwrap_or("f1").parse()?;
                let n = p.dimension.unwrap_or(5);
                let default = fid.default_domain(n)?;
                let domain = RealDomain::new(
                    p.min_x.unwrap_or(default.min_x),
                    p.max_x.unwrap_or(default.max_x),
                    n,
                )?;
                let problem = RealProblem::new(fid, n)?
                    .with_domain(domain)
                    .with_sigma(p.sigma.unwrap_or(RealProblem::DEFAULT_SIGMA))
                    .with_f5_abs(p.f5_abs.unwrap_or(false));
                problem.validate()?;
                ProblemSpec::Function(problem)
            }
            "tsp" | "qap" => {
                for (present, key) in [
                    (p.function.is_some(), "function"),
                    (p.dimension.is_some(), "dimension"),
                    (p.min_x.is_some(), "min_x"),
                    (p.max_x.is_some(), "max_x"),
                    (p.sigma.is_some(), "sigma"),
                    (p.f5_abs.is_some(), "f5_abs"),
                ] {
                    reject(present, key)?;
                }
                match (kind, p.file) {
                    ("tsp", Some(f)) => ProblemSpec::Tsp(load_tsp(&base.join(f))?),
                    ("tsp", None) => ProblemSpec::Tsp(TspProblem::new(default_tsp())?),
                    (_, Some(f)) => ProblemSpec::Qap(load_qap(&base.join(f))?),
                    (_, None) => ProblemSpec::Qap(QapProblem::new(default_qap())?),
                }
            }
            other => {
                return Err(Error::config(format!("unknown problem kind `{other}` (expected function, tsp or qap)")))
            }
        };

        let seed = raw.seed.unwrap_or(0);
        let m = raw.macro_;
        let d = MacroConfig::default();
        let macro_cfg = MacroConfig {
            pop_size: m.pop_size.unwrap_or(d.pop_size),
            code_length: m.code_length.unwrap_or(d.code_length),
            generations: m.generations.unwrap_or(if combinatorial { 50 } else { d.generations }),
            crossover_prob: m.crossover_prob.unwrap_or(d.crossover_prob),
            mutations_per_chromosome: m.mutations_per_chromosome.unwrap_or(d.mutations_per_chromosome),
            master_seed: seed,
            exec: Parallelism::default(),
        };
        macro_cfg.validate()?;

        let d = MicroConfig::default();
        let micro = MicroConfig {
            num_registers: raw.micro.num_registers.unwrap_or(d.num_registers),
            micro_generations: raw.micro.micro_generations.unwrap_or(d.micro_generations),
            runs_per_fitness: raw.micro.runs_per_fitness.unwrap_or(if combinatorial { 25 } else { d.runs_per_fitness }),
            seed: crate::rng::derive_seed(seed, &[0x006d_6963_726f]),
            exec: Parallelism::default(),
        };
        micro.validate()?;

        Ok(ExperimentConfig {
            seed,
            macro_cfg,
            micro,
            problem,
            output_dir: raw.output.dir.map(|d| base.join(d)).unwrap_or_else(|| PathBuf::from(".")),
        })
    }

    /// Replaces the seed everywhere it is used.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.macro_cfg.master_seed = seed;
        self.micro.seed = crate::rng::derive_seed(seed, &[0x006d_6963_726f]);
        self
    }

    pub fn with_exec(mut self, exec: Parallelism) -> Self {
        self.macro_cfg.exec = exec;
        self.micro.exec = exec;
        self
    }
}
