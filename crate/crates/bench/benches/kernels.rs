use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion};
use curvebound::descent::find_descent;
use curvebound::engine::{best_upper_bound, BoundQuery};
use curvebound::exactalg::{count_real_roots, difference_poly, factor, resultant, ExtRational};
use curvebound::oesterle::optimize;
use curvebound::zetatypes::enumerate_totally_positive;
use curvebound::{FieldContext, IntPolynomial};

fn exact_kernels(c: &mut Criterion) {
    let f = IntPolynomial::from_i64s(&[-1, 6, -5, 1]);
    let g = IntPolynomial::from_i64s(&[1, -3, 1]);
    let big = &(&f * &g).pow(2) * &IntPolynomial::from_i64s(&[2, -4, 1]);

    c.bench_function("resultant deg3 x deg2", |b| b.iter(|| resultant(black_box(&f), black_box(&g))));
    c.bench_function("difference_poly deg3 x deg2", |b| {
        b.iter(|| difference_poly(black_box(&f), black_box(&g)))
    });
    c.bench_function("sturm count deg12", |b| {
        b.iter(|| count_real_roots(black_box(&big), &ExtRational::NegInf, &ExtRational::PosInf))
    });
    c.bench_function("factor deg12", |b| b.iter(|| factor(black_box(&big))));
}

fn searches(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(10).measurement_time(Duration::from_secs(10));
    group.bench_function("totally positive deg5 trace10", |b| {
        b.iter(|| enumerate_totally_positive(black_box(5), black_box(10)))
    });
    group.bench_function("totally positive deg6 trace11", |b| {
        b.iter(|| enumerate_totally_positive(black_box(6), black_box(11)))
    });
    group.finish();
}

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    let ctx = FieldContext::new(3).unwrap();
    group.bench_function("explicit formulae q=3 g=5", |b| b.iter(|| optimize(&ctx, black_box(5), 10)));
    let ctx = FieldContext::new(8192).unwrap();
    group.bench_function("descent q=8192", |b| b.iter(|| find_descent(black_box(&ctx))));
    for (q, g) in [(8u64, 4usize), (9, 5), (64, 20)] {
        let query = BoundQuery::new(q, g);
        group.bench_function(format!("bound q={q} g={g}"), |b| b.iter(|| best_upper_bound(black_box(&query))));
    }
    group.finish();
}

criterion_group!(benches, exact_kernels, searches, pipeline);
criterion_main!(benches);
