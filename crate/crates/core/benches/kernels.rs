//! Sequential versus rayon execution of the hot kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cocycles::derivation::verify_msz_decomposition;
use cocycles::divergence::{coboundary, Div};
use cocycles::exec::Execution;
use cocycles::random::random_pairs;
use cocycles::solver::{build_system, solve, CochainAnsatz, Mode, PairPolicy, SolveOptions, Target};
use cocycles::symplectic::{es_uniqueness_solve, EsOptions, SymplecticContext};
use cocycles::tensor::Alphabet;

const STRATEGIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn constraint_rows(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_system n=3 k=3");
    g.sample_size(10);
    let ansatz = CochainAnsatz::new(Alphabet::new(3).unwrap(), Mode::Equivariant, Target::Bicyclic, 3);
    for (name, exec) in STRATEGIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| build_system(&ansatz, &PairPolicy::default(), exec).unwrap())
        });
    }
    g.finish();
}

fn full_solve(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve n=3 k=3");
    g.sample_size(10);
    let ansatz = CochainAnsatz::new(Alphabet::new(3).unwrap(), Mode::Equivariant, Target::Bicyclic, 3);
    for (name, exec) in STRATEGIES {
        let opts = SolveOptions {
            exec,
            ..SolveOptions::default()
        };
        g.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| b.iter(|| solve(&ansatz, opts).unwrap()));
    }
    g.finish();
}

fn div_pairs(c: &mut Criterion) {
    let mut g = c.benchmark_group("Div coboundary, 200 pairs n=3");
    g.sample_size(10);
    let pairs = random_pairs(1, Alphabet::new(3).unwrap(), 4, 200);
    for (name, exec) in STRATEGIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| exec.map(&pairs, |(d1, d2)| coboundary(&Div, d1, d2).unwrap().is_zero()))
        });
    }
    g.finish();
}

fn msz(c: &mut Criterion) {
    let mut g = c.benchmark_group("bracket generation n=3 k=3");
    g.sample_size(10);
    for (name, exec) in STRATEGIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| verify_msz_decomposition(Alphabet::new(3).unwrap(), 3, exec).unwrap())
        });
    }
    g.finish();
}

fn es_uniqueness(c: &mut Criterion) {
    let mut g = c.benchmark_group("trace uniqueness n=2 k=3");
    g.sample_size(10);
    let ctx = SymplecticContext::new(2).unwrap();
    for (name, exec) in STRATEGIES {
        let opts = EsOptions {
            exec,
            ..EsOptions::default()
        };
        g.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| es_uniqueness_solve(ctx, 3, opts).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, constraint_rows, full_solve, div_pairs, msz, es_uniqueness);
criterion_main!(benches);
