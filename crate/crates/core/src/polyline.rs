//! Ordered 3D polylines: the universal curve representation for
//! ground-truth centerlines, reconstructed outputs, and sampled Béziers.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Minimum separation between consecutive points, meters.
const MIN_POINT_SEPARATION: f64 = 1e-9;

/// An ordered sequence of world-space `(x, y, z)` points, at least two,
/// with no repeated consecutive points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 3]>", into = "Vec<[f64; 3]>")]
pub struct Polyline3D {
    points: Vec<[f64; 3]>,
}

impl Polyline3D {
    pub fn new(points: Vec<[f64; 3]>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("polyline needs at least 2 points"));
        }
        for p in &points {
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("polyline points must be finite"));
            }
        }
        for w in points.windows(2) {
            if dist3(w[0], w[1]) <= MIN_POINT_SEPARATION {
                return Err(Error::invalid("consecutive polyline points coincide"));
            }
        }
        Ok(Polyline3D { points })
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least two points
    }

    pub fn first(&self) -> [f64; 3] {
        self.points[0]
    }

    pub fn last(&self) -> [f64; 3] {
        *self.points.last().unwrap()
    }

    /// Total 3D arc length in meters.
    pub fn arc_length(&self) -> f64 {
        self.points.windows(2).map(|w| dist3(w[0], w[1])).sum()
    }

    /// Cumulative 3D arc length at each vertex; starts at 0.
    pub fn cumulative_lengths(&self) -> Vec<f64> {
        let mut cum = Vec::with_capacity(self.points.len());
        let mut acc = 0.0;
        cum.push(0.0);
        for w in self.points.windows(2) {
            acc += dist3(w[0], w[1]);
            cum.push(acc);
        }
        cum
    }

    /// Reverse the point order.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Polyline3D { points }
    }

    /// Apply `f` to every point. Fails if the image violates the polyline
    /// invariants.
    pub fn map_points(&self, f: impl Fn([f64; 3]) -> [f64; 3]) -> Result<Self> {
        Polyline3D::new(self.points.iter().map(|&p| f(p)).collect())
    }
}

impl TryFrom<Vec<[f64; 3]>> for Polyline3D {
    type Error = Error;
    fn try_from(points: Vec<[f64; 3]>) -> Result<Self> {
        Polyline3D::new(points)
    }
}

impl From<Polyline3D> for Vec<[f64; 3]> {
    fn from(p: Polyline3D) -> Self {
        p.points
    }
}

fn dist3(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    (dx * dx + dy * dy).sqrt()
}

/// Result of projecting a planar query point onto a polyline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    /// The 3D point on the piecewise-linear curve.
    pub point: [f64; 3],
    /// 3D arc-length parameter of that point along the curve.
    pub arc_param: f64,
    /// Planar (x, y) distance from the query to the projection.
    pub planar_distance: f64,
}

/// Project a planar query point onto a polyline.
///
/// The minimization runs in the `(x, y)` plane; `z` is interpolated along
/// the winning segment. Ties between equidistant candidates resolve to the
/// smallest arc parameter, so results are order-stable.
pub fn closest_point_on_polyline(curve: &Polyline3D, q: [f64; 2]) -> Projection {
    project_onto(curve.points(), q)
}

/// Slice-level projection used internally on grid-space point lists, which
/// may not satisfy the `Polyline3D` separation invariant after rescaling.
pub(crate) fn project_onto(pts: &[[f64; 3]], q: [f64; 2]) -> Projection {
    let mut best = Projection {
        point: pts[0],
        arc_param: 0.0,
        planar_distance: dist2([pts[0][0], pts[0][1]], q),
    };
    let mut arc_acc = 0.0;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let seg_len = dist3(a, b);
        let dx = b[0] - a[0];
        let dy = b[1] - a[1];
        let planar_sq = dx * dx + dy * dy;
        // Planar-degenerate segments (pure z steps) project onto their start.
        let t = if planar_sq > 0.0 {
            (((q[0] - a[0]) * dx + (q[1] - a[1]) * dy) / planar_sq).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let cand = [a[0] + t * dx, a[1] + t * dy, a[2] + t * (b[2] - a[2])];
        let d = dist2([cand[0], cand[1]], q);
        if d < best.planar_distance {
            best = Projection {
                point: cand,
                arc_param: arc_acc + t * seg_len,
                planar_distance: d,
            };
        }
        arc_acc += seg_len;
    }
    best
}

/// Resample a polyline to `n` points equally spaced by 3D arc length.
///
/// The first and last output points are copies of the input endpoints.
pub fn arc_length_resample(curve: &Polyline3D, n: usize) -> Result<Polyline3D> {
    if n < 2 {
        return Err(Error::invalid("resample count must be at least 2"));
    }
    let pts = curve.points();
    let cum = curve.cumulative_lengths();
    let total = *cum.last().unwrap();

    let mut out = Vec::with_capacity(n);
    out.push(pts[0]);
    let mut seg = 0usize;
    for k in 1..n - 1 {
        let target = total * k as f64 / (n - 1) as f64;
        while seg + 2 < cum.len() && cum[seg + 1] < target {
            seg += 1;
        }
        let seg_len = cum[seg + 1] - cum[seg];
        let t = if seg_len > 0.0 {
            (target - cum[seg]) / seg_len
        } else {
            0.0
        };
        let (a, b) = (pts[seg], pts[seg + 1]);
        out.push([
            a[0] + t * (b[0] - a[0]),
            a[1] + t * (b[1] - a[1]),
            a[2] + t * (b[2] - a[2]),
        ]);
    }
    out.push(pts[pts.len() - 1]);
    Polyline3D::new(out)
}
