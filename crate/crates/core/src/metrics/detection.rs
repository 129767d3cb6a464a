//! Detection mAP over curve-distance thresholds.

use serde::{Deserialize, Serialize};

use crate::metrics::assignment::hungarian;
use crate::metrics::distance::{chamfer, discrete_frechet};
use crate::polyline::{arc_length_resample, Polyline3D};
use crate::Result;

/// Cost used when masking invalid pairs out of an optimal assignment.
const INVALID_PAIR_COST: f64 = 1e12;

/// Which curve distance drives the matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceKind {
    Frechet,
    Chamfer,
}

/// Prediction-to-ground-truth matching strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetMatching {
    /// Confidence-ranked greedy matching to the nearest unmatched truth.
    Greedy,
    /// Globally optimal assignment per threshold.
    Optimal,
}

/// AP at one matching threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdAp {
    pub threshold_m: f64,
    pub ap_percent: f64,
}

/// mAP plus its per-threshold breakdown, percent scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetScore {
    pub map_percent: f64,
    pub per_threshold: Vec<ThresholdAp>,
}

/// Detection mAP with default options (11 evaluation samples per curve,
/// greedy matching).
pub fn det_score(
    preds: &[(Polyline3D, f64)],
    gts: &[Polyline3D],
    kind: DistanceKind,
    thresholds: &[f64],
) -> Result<DetScore> {
    det_score_with(preds, gts, kind, thresholds, 11, DetMatching::Greedy)
}

/// Detection mAP.
///
/// Both sides are arc-length resampled to `sample_points` before distance
/// evaluation, so dense ground truth and sparse predictions compare on
/// equal footing. Per threshold, predictions are ranked by descending
/// confidence and matched (greedy: to the nearest unmatched truth within
/// the threshold; optimal: by minimum-cost assignment). AP is the area
/// under the interpolated precision-recall curve; the reported mAP is the
/// mean over thresholds, ×100.
///
/// Empty ground truth scores 100 against empty predictions and 0 against
/// any prediction.
pub fn det_score_with(
    preds: &[(Polyline3D, f64)],
    gts: &[Polyline3D],
    kind: DistanceKind,
    thresholds: &[f64],
    sample_points: usize,
    matching: DetMatching,
) -> Result<DetScore> {
    let pred_samples: Vec<Polyline3D> = preds
        .iter()
        .map(|(p, _)| arc_length_resample(p, sample_points))
        .collect::<Result<_>>()?;
    let gt_samples: Vec<Polyline3D> = gts
        .iter()
        .map(|g| arc_length_resample(g, sample_points))
        .collect::<Result<_>>()?;

    let dist = |a: &Polyline3D, b: &Polyline3D| match kind {
        DistanceKind::Frechet => discrete_frechet(a, b),
        DistanceKind::Chamfer => chamfer(a, b),
    };
    let matrix: Vec<Vec<f64>> = pred_samples
        .iter()
        .map(|p| gt_samples.iter().map(|g| dist(p, g)).collect())
        .collect();

    // ranked prediction order: descending confidence, stable on ties
    let mut order: Vec<usize> = (0..preds.len()).collect();
    order.sort_by(|&a, &b| preds[b].1.total_cmp(&preds[a].1));

    let mut per_threshold = Vec::with_capacity(thresholds.len());
    for &theta in thresholds {
        let tp_flags = match matching {
            DetMatching::Greedy => greedy_tp_flags(&order, &matrix, gts.len(), theta),
            DetMatching::Optimal => optimal_tp_flags(&order, &matrix, gts.len(), theta)?,
        };
        per_threshold.push(ThresholdAp {
            threshold_m: theta,
            ap_percent: 100.0 * average_precision(&tp_flags, gts.len()),
        });
    }
    let map_percent =
        per_threshold.iter().map(|t| t.ap_percent).sum::<f64>() / per_threshold.len().max(1) as f64;
    Ok(DetScore {
        map_percent,
        per_threshold,
    })
}

fn greedy_tp_flags(order: &[usize], matrix: &[Vec<f64>], n_gt: usize, theta: f64) -> Vec<bool> {
    let mut taken = vec![false; n_gt];
    let mut flags = Vec::with_capacity(order.len());
    for &p in order {
        let mut best: Option<(f64, usize)> = None;
        for (g, &d) in matrix[p].iter().enumerate() {
            if taken[g] || d >= theta {
                continue;
            }
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, g));
            }
        }
        match best {
            Some((_, g)) => {
                taken[g] = true;
                flags.push(true);
            }
            None => flags.push(false),
        }
    }
    flags
}

fn optimal_tp_flags(
    order: &[usize],
    matrix: &[Vec<f64>],
    n_gt: usize,
    theta: f64,
) -> Result<Vec<bool>> {
    if matrix.is_empty() || n_gt == 0 {
        return Ok(vec![false; order.len()]);
    }
    let masked: Vec<Vec<f64>> = matrix
        .iter()
        .map(|row| {
            row.iter()
                .map(|&d| if d < theta { d } else { INVALID_PAIR_COST })
                .collect()
        })
        .collect();
    let pairs = hungarian(&masked)?;
    let mut is_tp = vec![false; matrix.len()];
    for (p, g) in pairs {
        if matrix[p][g] < theta {
            is_tp[p] = true;
        }
    }
    Ok(order.iter().map(|&p| is_tp[p]).collect())
}

/// Area under the interpolated precision-recall curve for a ranked
/// true-positive sequence.
pub(crate) fn average_precision(tp_flags: &[bool], n_gt: usize) -> f64 {
    if n_gt == 0 {
        return if tp_flags.is_empty() { 1.0 } else { 0.0 };
    }
    if tp_flags.is_empty() {
        return 0.0;
    }
    let mut tp = 0usize;
    let mut precision = Vec::with_capacity(tp_flags.len());
    let mut recall = Vec::with_capacity(tp_flags.len());
    for (k, &hit) in tp_flags.iter().enumerate() {
        if hit {
            tp += 1;
        }
        precision.push(tp as f64 / (k + 1) as f64);
        recall.push(tp as f64 / n_gt as f64);
    }
    // precision envelope: running maximum from the right
    let mut envelope = precision;
    for k in (0..envelope.len() - 1).rev() {
        envelope[k] = envelope[k].max(envelope[k + 1]);
    }
    let mut ap = 0.0;
    let mut prev_recall = 0.0;
    for (k, &r) in recall.iter().enumerate() {
        if r > prev_recall {
            ap += (r - prev_recall) * envelope[k];
            prev_recall = r;
        }
    }
    ap
}
