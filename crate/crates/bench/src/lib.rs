//! Shared fixture builders for the pipeline benchmarks.

use centerline_core::grid::GridSpec;
use centerline_core::polyline::Polyline3D;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn bench_grid() -> GridSpec {
    GridSpec::bev_default()
}

/// A smooth in-grid centerline with `n` vertices.
pub fn bench_centerline(seed: u64, n: usize) -> Polyline3D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0 = rng.random_range(-45.0..-10.0);
    let len = rng.random_range(30.0..50.0);
    let y0 = rng.random_range(-15.0..15.0);
    let amp = rng.random_range(0.5..2.5);
    Polyline3D::new(
        (0..n)
            .map(|k| {
                let t = k as f64 / (n - 1) as f64;
                let x = x0 + len * t;
                [x, y0 + amp * (0.1 * x).sin(), 2.0 * t]
            })
            .collect(),
    )
    .expect("bench centerline is valid")
}

/// Random cost matrix with entries in [0, 16).
pub fn bench_cost_matrix(seed: u64, n: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..n).map(|_| rng.random_range(0.0..16.0)).collect())
        .collect()
}
