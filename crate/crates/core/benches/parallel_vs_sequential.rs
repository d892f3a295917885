use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pellcount_core::exec::Exec;
use pellcount_core::pell::{count_both, count_s_param_with, CountWindow};
use pellcount_core::smooth::{mean_value_suite_with, psi_with};
use pellcount_core::verify::{run_suite, Level, VerifyOptions};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn counting(c: &mut Criterion) {
    let mut g = c.benchmark_group("count");
    g.sample_size(10);
    let w = CountWindow::from_f64(1e5, 0.75).unwrap();
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("d_loop", name), &exec, |b, &e| {
            b.iter(|| count_both(black_box(&w), e).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("parametrized", name), &exec, |b, &e| {
            b.iter(|| count_s_param_with(black_box(&w), e).unwrap())
        });
    }
    g.finish();
}

fn smooth(c: &mut Criterion) {
    let mut g = c.benchmark_group("smooth");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("psi_1e6_100", name), &exec, |b, &e| {
            b.iter(|| psi_with(black_box(1e6), 100.0, e).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("mean_values_1e5", name), &exec, |b, &e| {
            b.iter(|| mean_value_suite_with(black_box(100_000), Some(0.5), e).unwrap())
        });
    }
    g.finish();
}

fn sums(c: &mut Criterion) {
    let mut g = c.benchmark_group("exponential_sums");
    g.sample_size(10);
    let opts = VerifyOptions::new(Level::Fast, 1);
    for (name, exec) in MODES {
        g.bench_with_input(
            BenchmarkId::new("weil_bounds_fast", name),
            &exec,
            |b, &e| b.iter(|| run_suite("weil_bounds", &opts, e).unwrap()),
        );
    }
    g.finish();
}

criterion_group!(benches, counting, smooth, sums);
criterion_main!(benches);
