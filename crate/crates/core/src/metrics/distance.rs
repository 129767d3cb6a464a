//! Curve-to-curve distances over sampled polylines.

use crate::polyline::Polyline3D;

fn dist3(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Discrete Fréchet distance between two point sequences (3D Euclidean),
/// computed by dynamic programming over point pairs. Order-sensitive:
/// reversing one curve changes the result.
pub fn discrete_frechet(a: &Polyline3D, b: &Polyline3D) -> f64 {
    let pa = a.points();
    let pb = b.points();
    let m = pb.len();
    // rolling rows of the coupling table
    let mut prev = vec![0.0f64; m];
    let mut cur = vec![0.0f64; m];
    for (i, &ai) in pa.iter().enumerate() {
        for (j, &bj) in pb.iter().enumerate() {
            let d = dist3(ai, bj);
            let reach = match (i, j) {
                (0, 0) => d,
                (0, _) => cur[j - 1].max(d),
                (_, 0) => prev[0].max(d),
                (_, _) => prev[j].min(prev[j - 1]).min(cur[j - 1]).max(d),
            };
            cur[j] = reach;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m - 1]
}

/// Symmetric Chamfer distance over the sampled points:
/// `½ (meanₐ min_b ‖a−b‖ + mean_b minₐ ‖a−b‖)`. Order-insensitive.
pub fn chamfer(a: &Polyline3D, b: &Polyline3D) -> f64 {
    let pa = a.points();
    let pb = b.points();
    let directed = |from: &[[f64; 3]], to: &[[f64; 3]]| {
        from.iter()
            .map(|&p| {
                to.iter()
                    .map(|&q| dist3(p, q))
                    .fold(f64::INFINITY, f64::min)
            })
            .sum::<f64>()
            / from.len() as f64
    };
    0.5 * (directed(pa, pb) + directed(pb, pa))
}
