use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use lipfree::experiments::gen_weaver;
use lipfree::transport::{kr_norm_exact, kr_norm_float};
use lipfree::weights::weight_lambda;
use lipfree::{oracle_norm, WeightOperator};
use lipfree_bench::instance;

fn exact_norm(c: &mut Criterion) {
    let mut g = c.benchmark_group("kr_norm_exact");
    for n in [4, 8, 16, 32] {
        let m = instance(n, 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| kr_norm_exact(black_box(m)))
        });
    }
    g.finish();
}

fn float_norm(c: &mut Criterion) {
    let mut g = c.benchmark_group("kr_norm_float");
    for n in [8, 32, 50, 100] {
        let m = instance(n, 2);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| kr_norm_float(black_box(m), 1e-9).unwrap())
        });
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let m = instance(8, 3);
    c.bench_function("oracle_norm/8", |b| {
        b.iter(|| oracle_norm(black_box(&m)).unwrap())
    });
}

fn operator_norm(c: &mut Criterion) {
    let m = instance(8, 4);
    let op = WeightOperator::new(weight_lambda(m.space(), 1));
    c.bench_function("operator_norm/lambda/8", |b| {
        b.iter(|| black_box(&op).operator_norm())
    });
}

fn weaver(c: &mut Criterion) {
    let inst = gen_weaver(14).unwrap();
    c.bench_function("weaver/14", |b| {
        b.iter(|| kr_norm_exact(black_box(&inst.vector)))
    });
}

criterion_group!(
    benches,
    exact_norm,
    float_norm,
    oracle,
    operator_norm,
    weaver
);
criterion_main!(benches);
