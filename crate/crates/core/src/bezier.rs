//! Bézier curve evaluation and sampling for the parametric output path.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::polyline::{arc_length_resample, Polyline3D};
use crate::Result;

/// A 3D Bézier curve given by its control points (degree = count − 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BezierCurve {
    control_points: Vec<[f64; 3]>,
}

impl BezierCurve {
    pub fn new(control_points: Vec<[f64; 3]>) -> Result<Self> {
        if control_points.len() < 2 {
            return Err(Error::invalid(
                "Bézier curve needs at least 2 control points",
            ));
        }
        if control_points
            .iter()
            .any(|p| p.iter().any(|v| !v.is_finite()))
        {
            return Err(Error::invalid("Bézier control points must be finite"));
        }
        Ok(BezierCurve { control_points })
    }

    pub fn control_points(&self) -> &[[f64; 3]] {
        &self.control_points
    }

    pub fn degree(&self) -> usize {
        self.control_points.len() - 1
    }
}

/// Evaluate `B(t)` by de Casteljau recursion. `t` must lie in `[0, 1]`.
pub fn bezier_eval(curve: &BezierCurve, t: f64) -> Result<[f64; 3]> {
    if !(t.is_finite() && (0.0..=1.0).contains(&t)) {
        return Err(Error::invalid(format!(
            "Bézier parameter {t} outside [0, 1]"
        )));
    }
    let mut pts = curve.control_points.clone();
    let mut m = pts.len();
    while m > 1 {
        for k in 0..m - 1 {
            let next = pts[k + 1];
            for (v, n) in pts[k].iter_mut().zip(next) {
                *v += t * (n - *v);
            }
        }
        m -= 1;
    }
    Ok(pts[0])
}

/// Sample the curve at `n ≥ 2` uniformly spaced parameter values
/// `t = k / (n − 1)`, in order.
pub fn sample_bezier(curve: &BezierCurve, n: usize) -> Result<Polyline3D> {
    if n < 2 {
        return Err(Error::invalid("sample count must be at least 2"));
    }
    let pts = (0..n)
        .map(|k| bezier_eval(curve, k as f64 / (n - 1) as f64))
        .collect::<Result<Vec<_>>>()?;
    Polyline3D::new(pts)
}

/// Sample `n ≥ 2` points equally spaced by arc length instead of by
/// parameter. The curve is pre-sampled at `presample` uniform parameters
/// and resampled along its chord length.
pub fn sample_bezier_arclength(
    curve: &BezierCurve,
    n: usize,
    presample: usize,
) -> Result<Polyline3D> {
    if presample < n {
        return Err(Error::invalid(
            "presample count must be at least the sample count",
        ));
    }
    let dense = sample_bezier(curve, presample)?;
    arc_length_resample(&dense, n)
}
