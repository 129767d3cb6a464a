//! Supervision targets from ground-truth centerlines, and the loss terms
//! evaluated against them.
//!
//! Everything works in grid-index space: the continuous centerline is
//! mapped into grid coordinates once, every cell center `(i, j)` is
//! projected onto it, and the resulting offset/height values are stored
//! densely. The foreground band keeps only cells whose projection distance
//! stays below the band radius.

use crate::error::Error;
use crate::grid::{GridSpec, QuadDirection, ScalarGrid, VectorGrid};
use crate::polyline::{project_onto, Polyline3D, Projection};
use crate::Result;

/// Probability clamp applied before the BCE term.
const PROB_EPS: f64 = 1e-7;

/// Matcher and loss coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossWeights {
    pub lambda_cls: f64,
    pub lambda_reg: f64,
    pub lambda_mask_bce: f64,
    pub lambda_mask_dice: f64,
    pub lambda_offset: f64,
    pub lambda_height: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        LossWeights {
            lambda_cls: 2.0,
            lambda_reg: 5.0,
            lambda_mask_bce: 5.0,
            lambda_mask_dice: 5.0,
            lambda_offset: 20.0,
            lambda_height: 50.0,
        }
    }
}

impl LossWeights {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.lambda_cls,
            self.lambda_reg,
            self.lambda_mask_bce,
            self.lambda_mask_dice,
            self.lambda_offset,
            self.lambda_height,
        ];
        if all.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::invalid("loss weights must be non-negative"));
        }
        Ok(())
    }
}

/// Dense supervision targets for one centerline instance.
#[derive(Debug, Clone)]
pub struct TargetBundle {
    /// Binary rasterized mask.
    pub mask: ScalarGrid,
    /// Per-cell offset to the closest centerline point, grid cells.
    pub offset: VectorGrid,
    /// Per-cell normalized height of the closest centerline point; 0.5
    /// outside the band.
    pub height: ScalarGrid,
    /// Binary supervision band: `‖offset‖₂ < band_radius`.
    pub fg_band: ScalarGrid,
}

impl TargetBundle {
    /// Generate mask, offset, height, and band fields for one centerline.
    pub fn generate(
        centerline: &Polyline3D,
        spec: &GridSpec,
        width_cells: u32,
        band_radius_cells: f64,
    ) -> Result<TargetBundle> {
        let mask = rasterize_centerline(centerline, spec, width_cells)?;
        let (offset, fg_band, height) = dense_fields(centerline, spec, band_radius_cells)?;
        Ok(TargetBundle {
            mask,
            offset,
            height,
            fg_band,
        })
    }

    /// True when the rasterized mask has no foreground at all (centerline
    /// outside the grid footprint). Reported by callers, not fatal here.
    pub fn is_empty_mask(&self) -> bool {
        self.mask.foreground_count() == 0
    }
}

/// Map the centerline into grid-index space: `(i, j, h_norm)` per vertex.
fn grid_space_points(centerline: &Polyline3D, spec: &GridSpec) -> Vec<[f64; 3]> {
    centerline
        .points()
        .iter()
        .map(|p| {
            [
                (p[0] - spec.origin_world[0]) / spec.cell_size_m,
                (p[1] - spec.origin_world[1]) / spec.cell_size_m,
                spec.normalize_height(p[2]),
            ]
        })
        .collect()
}

/// Classify a centerline into its quad-direction label.
///
/// Each consecutive point pair votes with its planar delta sector; a vote
/// tie falls back to the sector of the start→end vector.
pub fn quad_direction_label(centerline: &Polyline3D) -> QuadDirection {
    let pts = centerline.points();
    let mut counts = [0usize; 4];
    for w in pts.windows(2) {
        let dir = QuadDirection::from_delta(w[1][0] - w[0][0], w[1][1] - w[0][1]);
        counts[dir_index(dir)] += 1;
    }
    let max = *counts.iter().max().unwrap();
    let winners: Vec<usize> = (0..4).filter(|&k| counts[k] == max).collect();
    if winners.len() == 1 {
        return index_dir(winners[0]);
    }
    let first = pts[0];
    let last = pts[pts.len() - 1];
    QuadDirection::from_delta(last[0] - first[0], last[1] - first[1])
}

fn dir_index(d: QuadDirection) -> usize {
    match d {
        QuadDirection::Up => 0,
        QuadDirection::Down => 1,
        QuadDirection::Left => 2,
        QuadDirection::Right => 3,
    }
}

fn index_dir(k: usize) -> QuadDirection {
    [
        QuadDirection::Up,
        QuadDirection::Down,
        QuadDirection::Left,
        QuadDirection::Right,
    ][k]
}

/// Rasterize a centerline into a binary mask.
///
/// A cell is foreground iff the planar distance from its center to the
/// centerline, measured in grid units, is strictly below `width_cells / 2`.
/// A centerline entirely outside the grid yields an all-zero mask; callers
/// report that as an empty-mask condition.
pub fn rasterize_centerline(
    centerline: &Polyline3D,
    spec: &GridSpec,
    width_cells: u32,
) -> Result<ScalarGrid> {
    if width_cells == 0 {
        return Err(Error::invalid("mask width must be at least 1 cell"));
    }
    let radius = width_cells as f64 / 2.0;
    let pts = grid_space_points(centerline, spec);
    let mut mask = ScalarGrid::zeros(*spec);

    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let i_lo = (a[0].min(b[0]) - radius).floor().max(0.0) as usize;
        let i_hi = (a[0].max(b[0]) + radius)
            .ceil()
            .min((spec.height_cells - 1) as f64) as usize;
        let j_lo = (a[1].min(b[1]) - radius).floor().max(0.0) as usize;
        let j_hi = (a[1].max(b[1]) + radius)
            .ceil()
            .min((spec.width_cells - 1) as f64) as usize;
        if a[0].max(b[0]) + radius < 0.0 || a[1].max(b[1]) + radius < 0.0 {
            continue;
        }
        for i in i_lo..=i_hi {
            for j in j_lo..=j_hi {
                if mask.get(i, j) == 1.0 {
                    continue;
                }
                if point_segment_distance_2d([i as f64, j as f64], a, b) < radius {
                    mask.set(i, j, 1.0);
                }
            }
        }
    }
    Ok(mask)
}

fn point_segment_distance_2d(q: [f64; 2], a: [f64; 3], b: [f64; 3]) -> f64 {
    let dx = b[0] - a[0];
    let dy = b[1] - a[1];
    let len_sq = dx * dx + dy * dy;
    let t = if len_sq > 0.0 {
        (((q[0] - a[0]) * dx + (q[1] - a[1]) * dy) / len_sq).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let px = a[0] + t * dx - q[0];
    let py = a[1] + t * dy - q[1];
    (px * px + py * py).sqrt()
}

/// Shared sweep producing offset, band, and height fields in one pass.
fn dense_fields(
    centerline: &Polyline3D,
    spec: &GridSpec,
    band_radius_cells: f64,
) -> Result<(VectorGrid, ScalarGrid, ScalarGrid)> {
    if !(band_radius_cells.is_finite() && band_radius_cells > 0.0) {
        return Err(Error::invalid("band radius must be positive"));
    }
    let pts = grid_space_points(centerline, spec);
    let mut offset = VectorGrid::zeros(*spec);
    let mut band = ScalarGrid::zeros(*spec);
    let mut height = ScalarGrid::filled(*spec, 0.5);

    for i in 0..spec.height_cells {
        for j in 0..spec.width_cells {
            let q = [i as f64, j as f64];
            let Projection { point, .. } = project_onto(&pts, q);
            let o = [point[0] - q[0], point[1] - q[1]];
            offset.set(i, j, o);
            if (o[0] * o[0] + o[1] * o[1]).sqrt() < band_radius_cells {
                band.set(i, j, 1.0);
                height.set(i, j, point[2]);
            }
        }
    }
    Ok((offset, band, height))
}

/// Per-cell offsets from cell centers to the closest centerline point, in
/// grid cells, plus the binary supervision band. Offsets are stored for
/// every cell; only band cells are meant for supervision.
pub fn target_offset_field(
    centerline: &Polyline3D,
    spec: &GridSpec,
    band_radius_cells: f64,
) -> Result<(VectorGrid, ScalarGrid)> {
    let (offset, band, _) = dense_fields(centerline, spec, band_radius_cells)?;
    Ok((offset, band))
}

/// Normalized height of the closest centerline point for every band cell;
/// 0.5 elsewhere.
pub fn target_height_field(
    centerline: &Polyline3D,
    spec: &GridSpec,
    band_radius_cells: f64,
) -> Result<ScalarGrid> {
    let (_, _, height) = dense_fields(centerline, spec, band_radius_cells)?;
    Ok(height)
}

fn check_dims(a: &GridSpec, b: &GridSpec) -> Result<()> {
    if a.height_cells != b.height_cells || a.width_cells != b.width_cells {
        return Err(Error::invalid("grid shapes do not match"));
    }
    Ok(())
}

/// Masked mean L1 loss over the offset field (both channels summed per
/// cell, normalized by the number of band cells).
pub fn offset_loss(pred: &VectorGrid, target: &VectorGrid, fg_band: &ScalarGrid) -> Result<f64> {
    check_dims(pred.spec(), target.spec())?;
    check_dims(pred.spec(), fg_band.spec())?;
    let mut sum = 0.0;
    let mut count = 0usize;
    for (k, fg) in fg_band.data().iter().enumerate() {
        if *fg > 0.5 {
            let p = pred.data()[k];
            let t = target.data()[k];
            sum += (p[0] - t[0]).abs() + (p[1] - t[1]).abs();
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::EmptyBand);
    }
    Ok(sum / count as f64)
}

/// Masked mean L1 loss over the height field.
pub fn height_loss(pred: &ScalarGrid, target: &ScalarGrid, fg_band: &ScalarGrid) -> Result<f64> {
    check_dims(pred.spec(), target.spec())?;
    check_dims(pred.spec(), fg_band.spec())?;
    let mut sum = 0.0;
    let mut count = 0usize;
    for (k, fg) in fg_band.data().iter().enumerate() {
        if *fg > 0.5 {
            sum += (pred.data()[k] - target.data()[k]).abs();
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::EmptyBand);
    }
    Ok(sum / count as f64)
}

/// BCE and Dice components of the instance mask loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskLoss {
    pub bce: f64,
    pub dice: f64,
}

impl MaskLoss {
    pub fn weighted(&self, w: &LossWeights) -> f64 {
        w.lambda_mask_bce * self.bce + w.lambda_mask_dice * self.dice
    }
}

/// Dense mask loss: BCE averaged over all cells plus the Dice complement.
/// Probabilities are clamped to `[1e-7, 1 − 1e-7]` for the logarithms;
/// the Dice term uses the raw values so it vanishes exactly at truth.
pub fn mask_loss(pred_prob: &ScalarGrid, gt_mask: &ScalarGrid) -> Result<MaskLoss> {
    check_dims(pred_prob.spec(), gt_mask.spec())?;
    let n = pred_prob.data().len() as f64;
    let mut bce = 0.0;
    let mut intersection = 0.0;
    let mut p_sum = 0.0;
    let mut g_sum = 0.0;
    for (&p, g) in pred_prob.data().iter().zip(gt_mask.data()) {
        let pc = p.clamp(PROB_EPS, 1.0 - PROB_EPS);
        bce -= g * pc.ln() + (1.0 - g) * (1.0 - pc).ln();
        intersection += p * g;
        p_sum += p;
        g_sum += g;
    }
    let dice = if p_sum + g_sum > 0.0 {
        1.0 - 2.0 * intersection / (p_sum + g_sum)
    } else {
        0.0 // two empty masks agree perfectly
    };
    Ok(MaskLoss { bce: bce / n, dice })
}

/// Prediction-side summary entering the matcher cost.
#[derive(Debug, Clone, Copy)]
pub struct MatchCandidate<'a> {
    /// Probability assigned to the ground-truth class.
    pub class_prob: f64,
    pub prob_map: &'a ScalarGrid,
    pub bezier_cp: Option<&'a [[f64; 3]]>,
}

/// Ground-truth side of the matcher cost.
#[derive(Debug, Clone, Copy)]
pub struct MatchTarget<'a> {
    pub mask: &'a ScalarGrid,
    pub bezier_cp: Option<&'a [[f64; 3]]>,
}

/// Bipartite matcher cost between one prediction and one ground truth:
///
/// `λ_cls·(1 − p_cls) + λ_reg·reg + λ_bce·BCE + λ_dice·Dice`
///
/// where `reg` is the mean L1 distance over paired control points. With
/// `λ_reg = 0` this is the mask matcher; with both mask weights zero it is
/// the L1 matcher.
pub fn match_cost(pred: &MatchCandidate, gt: &MatchTarget, w: &LossWeights) -> Result<f64> {
    w.validate()?;
    if !(0.0..=1.0).contains(&pred.class_prob) {
        return Err(Error::invalid("class probability outside [0, 1]"));
    }
    let mut cost = w.lambda_cls * (1.0 - pred.class_prob);

    if w.lambda_reg > 0.0 {
        let (pc, gc) = match (pred.bezier_cp, gt.bezier_cp) {
            (Some(p), Some(g)) => (p, g),
            _ => {
                return Err(Error::invalid(
                    "regression weight is positive but control points are missing",
                ))
            }
        };
        if pc.len() != gc.len() || pc.is_empty() {
            return Err(Error::invalid("control point counts do not match"));
        }
        let l1: f64 = pc
            .iter()
            .zip(gc)
            .map(|(a, b)| (a[0] - b[0]).abs() + (a[1] - b[1]).abs() + (a[2] - b[2]).abs())
            .sum();
        cost += w.lambda_reg * l1 / pc.len() as f64;
    }

    if w.lambda_mask_bce > 0.0 || w.lambda_mask_dice > 0.0 {
        let m = mask_loss(pred.prob_map, gt.mask)?;
        cost += m.weighted(w);
    }
    Ok(cost)
}
