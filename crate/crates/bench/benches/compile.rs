use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qflow_bench::{options, program};
use qflow_core::circuits::Level;
use qflow_core::optimizer::OptimizerConfig;
use qflow_core::pipeline::compile;
use std::hint::black_box;

fn compile_length(c: &mut Criterion) {
    let src = program("length");
    let mut g = c.benchmark_group("compile_length");
    for depth in [2, 5, 10] {
        for (tag, opt) in [("plain", OptimizerConfig::NONE), ("opt", OptimizerConfig::ALL)] {
            let o = options(&src, depth, opt);
            g.bench_with_input(BenchmarkId::new(tag, depth), &o, |b, o| b.iter(|| compile(black_box(&src), o).unwrap()));
        }
    }
    g.finish();
}

fn compile_corpus(c: &mut Criterion) {
    let mut g = c.benchmark_group("compile_corpus");
    for name in ["compare", "insert", "remove", "sum"] {
        let src = program(name);
        let o = options(&src, 3, OptimizerConfig::ALL);
        g.bench_function(name, |b| b.iter(|| compile(black_box(&src), &o).unwrap()));
    }
    g.finish();
}

fn decompose(c: &mut Criterion) {
    let src = program("length");
    let compiled = compile(&src, &options(&src, 10, OptimizerConfig::ALL)).unwrap();
    c.bench_function("clifford_t_length_10", |b| b.iter(|| black_box(&compiled).at(Level::CliffordT)));
}

criterion_group!(benches, compile_length, compile_corpus, decompose);
criterion_main!(benches);
