//! Geographic-split disjointness auditing over scene footprints.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Intersection areas below this are treated as touching, not overlapping.
const AREA_EPS_M2: f64 = 1e-6;

/// A convex planar footprint (driven-area polygon or bounding box),
/// stored counter-clockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct Footprint {
    vertices: Vec<[f64; 2]>,
}

impl Footprint {
    /// Validate a polygon: at least three finite vertices, non-zero area,
    /// convex. Either winding is accepted; storage is counter-clockwise.
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::invalid("footprint needs at least 3 vertices"));
        }
        if vertices
            .iter()
            .any(|p| !p[0].is_finite() || !p[1].is_finite())
        {
            return Err(Error::invalid("footprint vertices must be finite"));
        }
        let signed = signed_area(&vertices);
        if signed.abs() < AREA_EPS_M2 {
            return Err(Error::invalid("footprint has (near-)zero area"));
        }
        let mut vertices = vertices;
        if signed < 0.0 {
            vertices.reverse();
        }
        // convexity: every cross product of consecutive edges non-negative
        let n = vertices.len();
        for k in 0..n {
            let a = vertices[k];
            let b = vertices[(k + 1) % n];
            let c = vertices[(k + 2) % n];
            let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            if cross < -1e-9 {
                return Err(Error::invalid("footprint polygon is not convex"));
            }
        }
        Ok(Footprint { vertices })
    }

    /// Axis-aligned bounding box `[min_x, min_y, max_x, max_y]`.
    pub fn bbox(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Result<Self> {
        Footprint::new(vec![
            [min_x, min_y],
            [max_x, min_y],
            [max_x, max_y],
            [min_x, max_y],
        ])
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Intersection area with another convex footprint.
    pub fn intersection_area(&self, other: &Footprint) -> f64 {
        let clipped = clip_convex(&self.vertices, &other.vertices);
        if clipped.len() < 3 {
            0.0
        } else {
            signed_area(&clipped).abs()
        }
    }
}

impl TryFrom<Vec<[f64; 2]>> for Footprint {
    type Error = Error;
    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        Footprint::new(v)
    }
}

impl From<Footprint> for Vec<[f64; 2]> {
    fn from(f: Footprint) -> Self {
        f.vertices
    }
}

fn signed_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    let mut acc = 0.0;
    for k in 0..n {
        let a = poly[k];
        let b = poly[(k + 1) % n];
        acc += a[0] * b[1] - b[0] * a[1];
    }
    0.5 * acc
}

/// Sutherland–Hodgman clip of `subject` against a convex CCW `clip`.
fn clip_convex(subject: &[[f64; 2]], clip: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut output = subject.to_vec();
    let n = clip.len();
    for k in 0..n {
        if output.is_empty() {
            break;
        }
        let a = clip[k];
        let b = clip[(k + 1) % n];
        let inside =
            |p: [f64; 2]| (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= 0.0;
        let input = std::mem::take(&mut output);
        let m = input.len();
        for i in 0..m {
            let cur = input[i];
            let prev = input[(i + m - 1) % m];
            let cur_in = inside(cur);
            let prev_in = inside(prev);
            if cur_in != prev_in {
                output.push(edge_intersection(prev, cur, a, b));
            }
            if cur_in {
                output.push(cur);
            }
        }
    }
    output
}

fn edge_intersection(p1: [f64; 2], p2: [f64; 2], a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    let r = [p2[0] - p1[0], p2[1] - p1[1]];
    let s = [b[0] - a[0], b[1] - a[1]];
    let denom = r[0] * s[1] - r[1] * s[0];
    let t = ((a[0] - p1[0]) * s[1] - (a[1] - p1[1]) * s[0]) / denom;
    [p1[0] + t * r[0], p1[1] + t * r[1]]
}

/// Outcome of a train/validation footprint audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    /// Sum of all pairwise train×val intersection areas, m².
    pub total_intersection_area_m2: f64,
    /// Number of train×val pairs with intersection area above 1e-6 m².
    pub intersecting_pairs: usize,
    /// True iff no pair intersects above the area epsilon.
    pub disjoint: bool,
}

/// Audit two footprint sets for geographic overlap. Every train×val pair
/// is intersected; the split is disjoint iff no pair overlaps by more
/// than 1e-6 m².
pub fn audit_geographic_overlap(train: &[Footprint], val: &[Footprint]) -> OverlapReport {
    let mut total = 0.0;
    let mut pairs = 0usize;
    for t in train {
        for v in val {
            let area = t.intersection_area(v);
            if area > AREA_EPS_M2 {
                total += area;
                pairs += 1;
            }
        }
    }
    OverlapReport {
        total_intersection_area_m2: total,
        intersecting_pairs: pairs,
        disjoint: pairs == 0,
    }
}
