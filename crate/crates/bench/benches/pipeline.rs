//! Hot-path benchmarks: curve distances, assignment, target generation,
//! and the raster-to-vector reconstruction chain.

use centerline_bench::{bench_centerline, bench_cost_matrix, bench_grid};
use centerline_core::extract::{binarize, multi_point_proposal};
use centerline_core::metrics::{chamfer, discrete_frechet, hungarian};
use centerline_core::polyline::arc_length_resample;
use centerline_core::reconstruct::{reconstruct_curve, ReconstructionConfig};
use centerline_core::targets::{quad_direction_label, TargetBundle};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn curve_distances(c: &mut Criterion) {
    let mut group = c.benchmark_group("distance");
    for n in [11usize, 101] {
        let a = arc_length_resample(&bench_centerline(1, 64), n).unwrap();
        let b = arc_length_resample(&bench_centerline(2, 64), n).unwrap();
        group.bench_with_input(BenchmarkId::new("frechet", n), &n, |bench, _| {
            bench.iter(|| discrete_frechet(black_box(&a), black_box(&b)))
        });
        group.bench_with_input(BenchmarkId::new("chamfer", n), &n, |bench, _| {
            bench.iter(|| chamfer(black_box(&a), black_box(&b)))
        });
    }
    group.finish();
}

fn assignment(c: &mut Criterion) {
    let mut group = c.benchmark_group("hungarian");
    for n in [8usize, 32, 64] {
        let cost = bench_cost_matrix(3, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| {
            bench.iter(|| hungarian(black_box(&cost)).unwrap())
        });
    }
    group.finish();
}

fn target_generation(c: &mut Criterion) {
    let spec = bench_grid();
    let gt = bench_centerline(5, 36);
    c.bench_function("targets/bundle_200x104", |bench| {
        bench.iter(|| TargetBundle::generate(black_box(&gt), &spec, 4, 4.0).unwrap())
    });
}

fn reconstruction(c: &mut Criterion) {
    let spec = bench_grid();
    let gt = bench_centerline(7, 36);
    let dir = quad_direction_label(&gt);
    let bundle = TargetBundle::generate(&gt, &spec, 4, 4.0).unwrap();
    let mask = binarize(&bundle.mask, 0.95).unwrap();
    let cfg = ReconstructionConfig::default();

    c.bench_function("extract/multi_proposal", |bench| {
        bench.iter(|| {
            multi_point_proposal(black_box(&mask), &bundle.offset, &bundle.height).unwrap()
        })
    });
    let points = multi_point_proposal(&mask, &bundle.offset, &bundle.height).unwrap();
    c.bench_function("reconstruct/curve", |bench| {
        bench.iter(|| reconstruct_curve(black_box(&points), dir, &spec, &cfg).unwrap())
    });
}

criterion_group!(
    benches,
    curve_distances,
    assignment,
    target_generation,
    reconstruction
);
criterion_main!(benches);
