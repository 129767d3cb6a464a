//! Smooth curve reconstruction from refined grid-space point sets:
//! direction-aware polynomial path fit, separable height-surface fit,
//! presampling, arc-length resampling, and directional ordering.
//!
//! Fits run on midrange-centered, halfspan-scaled variables: raw BEV
//! coordinates span up to a hundred cells and a 4th-order Vandermonde on
//! raw values is too ill-conditioned. Solutions come from a rank-truncated
//! SVD, so degenerate inputs (collinear, duplicate abscissae) yield finite
//! minimum-norm fits instead of failures.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::extract::GridPointSet;
use crate::grid::{grid_to_world, GridSpec, QuadDirection};
use crate::polyline::{arc_length_resample, Polyline3D};
use crate::Result;

/// Minimum extent of the independent variable, meters.
const MIN_INDEP_SPAN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructionConfig {
    /// Order of the 2D path polynomial.
    pub path_poly_order: usize,
    /// Order of the separable height surface.
    pub height_poly_order: usize,
    /// Number of equidistant output points.
    pub n_output_points: usize,
    /// Number of presample locations along the fitted path.
    pub presample_count: usize,
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        ReconstructionConfig {
            path_poly_order: 4,
            height_poly_order: 3,
            n_output_points: 11,
            presample_count: 100,
        }
    }
}

impl ReconstructionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.path_poly_order < 1 {
            return Err(Error::invalid("path polynomial order must be at least 1"));
        }
        if self.n_output_points < 2 {
            return Err(Error::invalid("output point count must be at least 2"));
        }
        if self.presample_count < self.n_output_points {
            return Err(Error::invalid(
                "presample count must be at least the output point count",
            ));
        }
        Ok(())
    }
}

/// Rank tolerance for an SVD-based least-squares solve.
fn svd_tolerance(rows: usize, cols: usize, max_sv: f64) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * max_sv.max(f64::MIN_POSITIVE)
}

/// Minimum-norm least squares via SVD. Returns the solution and whether
/// the design matrix was rank-deficient.
fn lstsq(a: DMatrix<f64>, b: DVector<f64>) -> Result<(DVector<f64>, bool)> {
    let (rows, cols) = a.shape();
    let svd = a.svd(true, true);
    let max_sv = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    let tol = svd_tolerance(rows, cols, max_sv);
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    let sol = svd
        .solve(&b, tol)
        .map_err(|e| Error::invalid(format!("least-squares solve failed: {e}")))?;
    Ok((sol, rank < cols))
}

/// A 1D polynomial fit in a normalized frame `t = (v − center) / scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPolynomial {
    coeffs: Vec<f64>,
    center: f64,
    scale: f64,
    order_reduced: bool,
}

impl PathPolynomial {
    /// Coefficients in the normalized frame, ascending powers.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// `(center, scale)` of the independent-variable normalization.
    pub fn normalization(&self) -> (f64, f64) {
        (self.center, self.scale)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// True when the requested order was not attainable.
    pub fn order_reduced(&self) -> bool {
        self.order_reduced
    }

    /// Evaluate at a raw (unnormalized) independent value.
    pub fn eval(&self, indep: f64) -> f64 {
        let t = (indep - self.center) / self.scale;
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }
}

fn normalization(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let lo = values.clone().fold(f64::INFINITY, f64::min);
    let hi = values.fold(f64::NEG_INFINITY, f64::max);
    let center = 0.5 * (lo + hi);
    let scale = 0.5 * (hi - lo);
    (center, if scale > 0.0 { scale } else { 1.0 })
}

/// Fit `dep = f(indep)` by least squares. The quad direction selects the
/// independent variable: world `x` for `Up`/`Down`, world `y` for
/// `Left`/`Right`. If fewer than `order + 1` distinct abscissae exist the
/// order degrades to the largest feasible one and the result is flagged.
pub fn fit_path_polynomial(
    points_xy: &[[f64; 2]],
    dir: QuadDirection,
    order: usize,
) -> Result<PathPolynomial> {
    if order < 1 {
        return Err(Error::invalid("polynomial order must be at least 1"));
    }
    if points_xy.is_empty() {
        return Err(Error::invalid("cannot fit a polynomial to zero points"));
    }
    if points_xy
        .iter()
        .any(|p| !p[0].is_finite() || !p[1].is_finite())
    {
        return Err(Error::invalid("fit points must be finite"));
    }
    let (indep, dep): (Vec<f64>, Vec<f64>) = if dir.is_vertical() {
        points_xy.iter().map(|p| (p[0], p[1])).unzip()
    } else {
        points_xy.iter().map(|p| (p[1], p[0])).unzip()
    };

    let mut sorted = indep.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sorted.dedup();
    let distinct = sorted.len();

    let feasible = order.min(distinct.saturating_sub(1));
    let mut reduced = feasible < order;

    let (center, scale) = normalization(indep.iter().copied());
    let a = DMatrix::from_fn(indep.len(), feasible + 1, |r, c| {
        ((indep[r] - center) / scale).powi(c as i32)
    });
    let b = DVector::from_vec(dep);
    let (sol, rank_deficient) = lstsq(a, b)?;
    reduced |= rank_deficient;

    Ok(PathPolynomial {
        coeffs: sol.iter().copied().collect(),
        center,
        scale,
        order_reduced: reduced,
    })
}

/// Separable polynomial height surface
/// `z = C₀ + Σᵢ (C₂ᵢ₋₁ xⁱ + C₂ᵢ yⁱ)`, fit in a normalized frame.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightSurface {
    norm_coeffs: Vec<f64>,
    cx: f64,
    sx: f64,
    cy: f64,
    sy: f64,
    order: usize,
    order_reduced: bool,
}

impl HeightSurface {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn order_reduced(&self) -> bool {
        self.order_reduced
    }

    /// Evaluate at world `(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let tx = (x - self.cx) / self.sx;
        let ty = (y - self.cy) / self.sy;
        let mut acc = self.norm_coeffs[0];
        let mut px = 1.0;
        let mut py = 1.0;
        for i in 1..=self.order {
            px *= tx;
            py *= ty;
            acc += self.norm_coeffs[2 * i - 1] * px + self.norm_coeffs[2 * i] * py;
        }
        acc
    }

    /// World-frame monomial coefficients `[C₀, C₁, …, C₂ₘ]` where odd
    /// indices multiply `xⁱ` and even indices `yⁱ`.
    pub fn coefficients(&self) -> Vec<f64> {
        let m = self.order;
        let mut world = vec![0.0; 2 * m + 1];
        world[0] = self.norm_coeffs[0];
        // binomial expansion of ((v − c)/s)^k into raw monomials
        let expand = |world: &mut Vec<f64>, c: f64, s: f64, axis_odd: bool| {
            for k in 1..=m {
                let coeff = self.norm_coeffs[if axis_odd { 2 * k - 1 } else { 2 * k }];
                if coeff == 0.0 {
                    continue;
                }
                let s_inv = s.powi(-(k as i32));
                let mut binom = 1.0f64;
                for r in 0..=k {
                    if r > 0 {
                        binom = binom * (k - r + 1) as f64 / r as f64;
                    }
                    let term = coeff * s_inv * binom * (-c).powi((k - r) as i32);
                    if r == 0 {
                        world[0] += term;
                    } else {
                        world[if axis_odd { 2 * r - 1 } else { 2 * r }] += term;
                    }
                }
            }
        };
        expand(&mut world, self.cx, self.sx, true);
        expand(&mut world, self.cy, self.sy, false);
        world
    }
}

/// Fit the separable height surface to world `(x, y, z)` points. The order
/// degrades when too few points are available; rank-deficient geometry
/// (e.g. collinear points) resolves to the minimum-norm solution and is
/// flagged as reduced.
pub fn fit_height_surface(points: &[[f64; 3]], order: usize) -> Result<HeightSurface> {
    if order < 1 {
        return Err(Error::invalid("surface order must be at least 1"));
    }
    if points.is_empty() {
        return Err(Error::invalid("cannot fit a surface to zero points"));
    }
    if points.iter().any(|p| p.iter().any(|v| !v.is_finite())) {
        return Err(Error::invalid("fit points must be finite"));
    }

    // largest order with 1 + 2m coefficients supported by the point count
    let feasible = order.min((points.len().saturating_sub(1)) / 2);
    let mut reduced = feasible < order;

    let (cx, sx) = normalization(points.iter().map(|p| p[0]));
    let (cy, sy) = normalization(points.iter().map(|p| p[1]));

    let ncoeffs = 2 * feasible + 1;
    let a = DMatrix::from_fn(points.len(), ncoeffs, |r, c| {
        if c == 0 {
            1.0
        } else {
            let k = c.div_ceil(2) as i32;
            if c % 2 == 1 {
                ((points[r][0] - cx) / sx).powi(k)
            } else {
                ((points[r][1] - cy) / sy).powi(k)
            }
        }
    });
    let b = DVector::from_iterator(points.len(), points.iter().map(|p| p[2]));
    let (sol, rank_deficient) = lstsq(a, b)?;
    reduced |= rank_deficient;

    Ok(HeightSurface {
        norm_coeffs: sol.iter().copied().collect(),
        cx,
        sx,
        cy,
        sy,
        order: feasible,
        order_reduced: reduced,
    })
}

/// Full reconstruction: grid→world transform, path and height fits,
/// presampling over the observed abscissa span, arc-length resampling to
/// `n_output_points`, and directional ordering (`Up` ascending `x`, `Down`
/// descending `x`, `Right` ascending `y`, `Left` descending `y`).
pub fn reconstruct_curve(
    points: &GridPointSet,
    dir: QuadDirection,
    spec: &GridSpec,
    cfg: &ReconstructionConfig,
) -> Result<Polyline3D> {
    cfg.validate()?;
    if points.len() < 2 {
        return Err(Error::ReconstructionFailed(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    let world: Vec<[f64; 3]> = points
        .points
        .iter()
        .map(|&p| grid_to_world(spec, p))
        .collect::<Result<_>>()
        .map_err(|_| Error::ReconstructionFailed("non-finite input point".into()))?;

    let xy: Vec<[f64; 2]> = world.iter().map(|p| [p[0], p[1]]).collect();
    let path = fit_path_polynomial(&xy, dir, cfg.path_poly_order)?;
    let surface = fit_height_surface(&world, cfg.height_poly_order)?;

    let indep_of = |p: &[f64; 3]| if dir.is_vertical() { p[0] } else { p[1] };
    let lo = world.iter().map(indep_of).fold(f64::INFINITY, f64::min);
    let hi = world.iter().map(indep_of).fold(f64::NEG_INFINITY, f64::max);
    if !(hi - lo).is_finite() || hi - lo <= MIN_INDEP_SPAN {
        return Err(Error::ReconstructionFailed(format!(
            "degenerate independent-variable span {:.3e}",
            hi - lo
        )));
    }

    let mut presampled = Vec::with_capacity(cfg.presample_count);
    for k in 0..cfg.presample_count {
        let t = lo + (hi - lo) * k as f64 / (cfg.presample_count - 1) as f64;
        let dep = path.eval(t);
        let (x, y) = if dir.is_vertical() {
            (t, dep)
        } else {
            (dep, t)
        };
        let z = surface.eval(x, y);
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::ReconstructionFailed(
                "fit produced non-finite values".into(),
            ));
        }
        presampled.push([x, y, z]);
    }

    let dense = Polyline3D::new(presampled)
        .map_err(|e| Error::ReconstructionFailed(format!("presampled path invalid: {e}")))?;
    let resampled = arc_length_resample(&dense, cfg.n_output_points)
        .map_err(|e| Error::ReconstructionFailed(format!("resampling failed: {e}")))?;

    // The resampled points sit on chords of the presampled polyline; snap
    // them back onto the fitted curve at their abscissae.
    let mut pts: Vec<[f64; 3]> = resampled
        .points()
        .iter()
        .map(|p| {
            let t = if dir.is_vertical() { p[0] } else { p[1] };
            let dep = path.eval(t);
            let (x, y) = if dir.is_vertical() {
                (t, dep)
            } else {
                (dep, t)
            };
            [x, y, surface.eval(x, y)]
        })
        .collect();
    match dir {
        QuadDirection::Up => pts.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap()),
        QuadDirection::Down => pts.sort_by(|a, b| b[0].partial_cmp(&a[0]).unwrap()),
        QuadDirection::Right => pts.sort_by(|a, b| a[1].partial_cmp(&b[1]).unwrap()),
        QuadDirection::Left => pts.sort_by(|a, b| b[1].partial_cmp(&a[1]).unwrap()),
    }
    Polyline3D::new(pts)
        .map_err(|e| Error::ReconstructionFailed(format!("ordered output invalid: {e}")))
}

/// Element-wise midpoint of two equally sampled polylines.
pub fn fuse_outputs(mask_pts: &Polyline3D, bezier_pts: &Polyline3D) -> Result<Polyline3D> {
    if mask_pts.len() != bezier_pts.len() {
        return Err(Error::invalid(format!(
            "fusion needs equal point counts, got {} and {}",
            mask_pts.len(),
            bezier_pts.len()
        )));
    }
    let fused = mask_pts
        .points()
        .iter()
        .zip(bezier_pts.points())
        .map(|(m, b)| {
            [
                0.5 * (m[0] + b[0]),
                0.5 * (m[1] + b[1]),
                0.5 * (m[2] + b[2]),
            ]
        })
        .collect();
    Polyline3D::new(fused)
}
