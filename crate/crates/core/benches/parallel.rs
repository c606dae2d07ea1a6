use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eea_core::config::default_tsp;
use eea_core::interp::program_fitness;
use eea_core::problems::real::{FunctionId, RealProblem};
use eea_core::problems::tsp::TspProblem;
use eea_core::program::random_program;
use eea_core::rng::rng_from_seed;
use eea_core::{MicroConfig, Parallelism};

// Sequential vs rayon fan-out of the R micro-runs behind one fitness call.
fn fitness(c: &mut Criterion) {
    let program = random_program(80, 40, 100, &mut rng_from_seed(1)).unwrap();
    let f1 = RealProblem::new(FunctionId::F1, 5).unwrap();
    let tsp = TspProblem::new(default_tsp()).unwrap();

    let mut group = c.benchmark_group("program_fitness");
    group.sample_size(10);
    for exec in [Parallelism::Sequential, Parallelism::Parallel] {
        let label = format!("{exec:?}");
        let cfg = MicroConfig { runs_per_fitness: 100, exec, ..MicroConfig::default() };
        group.bench_with_input(BenchmarkId::new("f1_r100", &label), &cfg, |b, cfg| {
            b.iter(|| program_fitness(&program, &f1, cfg).unwrap())
        });
        let cfg = MicroConfig { runs_per_fitness: 25, micro_generations: 20, exec, ..MicroConfig::default() };
        group.bench_with_input(BenchmarkId::new("att48_r25", &label), &cfg, |b, cfg| {
            b.iter(|| program_fitness(&program, &tsp, cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, fitness);
criterion_main!(benches);
