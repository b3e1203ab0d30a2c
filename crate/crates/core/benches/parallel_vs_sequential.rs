use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hciz_core::haarmc::{hciz_test_matrices, mc_integral_with, phase, McKind};
use hciz_core::monotone::{endpoint_histogram, WalkGuard};
use hciz_core::plancherel::{expectation_table, lis_bruteforce_with, Observable};
use hciz_core::scalar::Complex64;
use hciz_core::{Execution, Partition};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("mc_hciz_n3");
    group.sample_size(10);
    let spec = [phase(0.3), phase(1.7), phase(-2.2)];
    let (a, b) = hciz_test_matrices(&spec, &spec, 1).unwrap();
    let z = Complex64::new(0.0, 0.1);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| mc_integral_with(&McKind::Hciz, z, &a, &b, 20_000, 7, exec).unwrap())
        });
    }
    group.finish();
}

fn walk_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("monotone_walks_d5_r6");
    group.sample_size(10);
    let alpha = Partition::new(vec![2, 2, 1]).unwrap();
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| endpoint_histogram(black_box(&alpha), 6, false, WalkGuard::default(), exec).unwrap())
        });
    }
    group.finish();
}

fn lis_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("lis_bruteforce_d8");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| lis_bruteforce_with(black_box(8), 3, exec).unwrap())
        });
    }
    group.finish();
}

fn plancherel_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("expectation_table_d8");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| expectation_table(8, &Observable::OmegaInverse, 8, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, monte_carlo, walk_enumeration, lis_enumeration, plancherel_table);
criterion_main!(benches);
