use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hodgecalc::nilpotent::weight_filtration;
use hodgecalc::sl2hodge::{check_cone_polarization, merge_bisl2, reduce_cone};
use hodgecalc_bench::{dense_matrix, merge_input, scrambled_cone, scrambled_nilpotent};

fn rref(c: &mut Criterion) {
    let mut g = c.benchmark_group("rref");
    for n in [4, 8, 12] {
        let m = dense_matrix(n, 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| black_box(m.rref())));
    }
    g.finish();
}

fn weight_filtrations(c: &mut Criterion) {
    let mut g = c.benchmark_group("weight_filtration");
    for sizes in [vec![3, 2, 1], vec![4, 3, 2], vec![5, 3, 3, 1]] {
        let n = scrambled_nilpotent(&sizes, 2);
        let label = format!("{sizes:?}");
        g.bench_with_input(BenchmarkId::from_parameter(label), &n, |b, n| {
            b.iter(|| black_box(weight_filtration(n, 0).expect("nilpotent")))
        });
    }
    g.finish();
}

fn merges(c: &mut Criterion) {
    let mut g = c.benchmark_group("merge_bisl2");
    g.sample_size(20);
    for max_dim in [8, 16] {
        let (d, s) = merge_input(3, max_dim);
        g.bench_with_input(BenchmarkId::from_parameter(d.dim()), &(d, s), |b, (d, s)| {
            b.iter(|| black_box(merge_bisl2(d, Some(s)).expect("polarized input")))
        });
    }
    g.finish();
}

fn cones(c: &mut Criterion) {
    let mut g = c.benchmark_group("cone");
    g.sample_size(10);
    let cone = scrambled_cone(2, 1, 4);
    g.bench_function("check", |b| b.iter(|| black_box(check_cone_polarization(&cone, 5, 0).expect("cone"))));
    g.bench_function("reduce", |b| b.iter(|| black_box(reduce_cone(&cone, 1, 5, 0).expect("cone"))));
    g.finish();
}

criterion_group!(benches, rref, weight_filtrations, merges, cones);
criterion_main!(benches);
