//! Lane-to-lane topology AP over a vertex-matched adjacency matrix.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::metrics::assignment::hungarian;
use crate::metrics::detection::ThresholdAp;
use crate::metrics::distance::discrete_frechet;
use crate::metrics::{MetricConfig, SceneGraph, TopDenominator};
use crate::polyline::{arc_length_resample, Polyline3D};
use crate::Result;

const INVALID_PAIR_COST: f64 = 1e12;

/// Remap a confidence: add `bonus` when the value exceeds `floor`.
pub fn score_remap(conf: f64, floor: f64, bonus: f64) -> f64 {
    if conf > floor {
        conf + bonus
    } else {
        conf
    }
}

/// Topology score plus per-threshold breakdown, percent scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyScore {
    pub top_ll_percent: f64,
    pub per_threshold: Vec<ThresholdAp>,
}

/// Partial sums that accumulate across thresholds and scenes.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct TopAccumulator {
    pub ap_sum: f64,
    pub defined: usize,
    /// `2·|V|` per threshold, for the strict denominator.
    pub slots: usize,
}

impl TopAccumulator {
    pub fn score_percent(&self, denom: TopDenominator) -> f64 {
        let denominator = match denom {
            TopDenominator::Defined => self.defined,
            TopDenominator::Strict => self.slots,
        };
        if denominator == 0 {
            // no ground-truth adjacency to score against
            100.0
        } else {
            100.0 * self.ap_sum / denominator as f64
        }
    }

    pub fn merge(&mut self, other: TopAccumulator) {
        self.ap_sum += other.ap_sum;
        self.defined += other.defined;
        self.slots += other.slots;
    }
}

/// Per-threshold AP accumulation for one scene pair.
pub(crate) fn top_accumulate(
    pred: &SceneGraph,
    gt: &SceneGraph,
    cfg: &MetricConfig,
) -> Result<Vec<TopAccumulator>> {
    cfg.validate()?;
    let n_gt = gt.vertices().len();
    let n_pred = pred.vertices().len();

    let pred_samples: Vec<Polyline3D> = pred
        .vertices()
        .iter()
        .map(|v| arc_length_resample(&v.polyline, cfg.eval_sample_points))
        .collect::<Result<_>>()?;
    let gt_samples: Vec<Polyline3D> = gt
        .vertices()
        .iter()
        .map(|v| arc_length_resample(&v.polyline, cfg.eval_sample_points))
        .collect::<Result<_>>()?;

    let dist: Vec<Vec<f64>> = pred_samples
        .iter()
        .map(|p| gt_samples.iter().map(|g| discrete_frechet(p, g)).collect())
        .collect();

    // index-space edge lookups
    let pred_index: HashMap<u32, usize> = pred
        .vertices()
        .iter()
        .enumerate()
        .map(|(k, v)| (v.id, k))
        .collect();
    let gt_index: HashMap<u32, usize> = gt
        .vertices()
        .iter()
        .enumerate()
        .map(|(k, v)| (v.id, k))
        .collect();
    let mut pred_conf: HashMap<(usize, usize), f64> = HashMap::new();
    for e in pred.edges() {
        pred_conf.insert((pred_index[&e.src], pred_index[&e.dst]), e.confidence);
    }
    let mut gt_adj = vec![vec![false; n_gt]; n_gt];
    let mut out_neighbors = vec![Vec::new(); n_gt];
    let mut in_neighbors = vec![Vec::new(); n_gt];
    for e in gt.edges() {
        let (s, d) = (gt_index[&e.src], gt_index[&e.dst]);
        gt_adj[s][d] = true;
        out_neighbors[s].push(d);
        in_neighbors[d].push(s);
    }

    let mut out = Vec::with_capacity(cfg.frechet_thresholds_m.len());
    for &theta in &cfg.frechet_thresholds_m {
        // one-to-one vertex match, valid only below the threshold
        let mut matched_pred: Vec<Option<usize>> = vec![None; n_gt];
        if n_pred > 0 && n_gt > 0 {
            let masked: Vec<Vec<f64>> = dist
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|&d| if d < theta { d } else { INVALID_PAIR_COST })
                        .collect()
                })
                .collect();
            for (p, g) in hungarian(&masked)? {
                if dist[p][g] < theta {
                    matched_pred[g] = Some(p);
                }
            }
        }

        // adjacency over ground-truth vertex pairs
        let entry = |a: usize, b: usize| -> f64 {
            match (matched_pred[a], matched_pred[b]) {
                (Some(pa), Some(pb)) => {
                    let conf = pred_conf.get(&(pa, pb)).copied().unwrap_or(0.0);
                    if cfg.remap_enabled {
                        score_remap(conf, cfg.remap_floor, cfg.remap_bonus)
                    } else {
                        conf
                    }
                }
                _ => {
                    if gt_adj[a][b] {
                        0.0
                    } else {
                        cfg.unmatched_negative_penalty
                    }
                }
            }
        };

        let mut acc = TopAccumulator {
            slots: 2 * n_gt,
            ..TopAccumulator::default()
        };
        for v in 0..n_gt {
            for direction in 0..2 {
                let truths = if direction == 0 {
                    &out_neighbors[v]
                } else {
                    &in_neighbors[v]
                };
                if truths.is_empty() {
                    continue;
                }
                // candidates above the ranking threshold, by descending
                // confidence then vertex index
                let mut ranked: Vec<(f64, usize)> = (0..n_gt)
                    .filter(|&n| n != v)
                    .map(|n| {
                        let conf = if direction == 0 {
                            entry(v, n)
                        } else {
                            entry(n, v)
                        };
                        (conf, n)
                    })
                    .filter(|&(conf, _)| conf > cfg.ranking_threshold)
                    .collect();
                ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

                let mut hits = 0usize;
                let mut precision_sum = 0.0;
                for (rank, &(_, n)) in ranked.iter().enumerate() {
                    if truths.contains(&n) {
                        hits += 1;
                        precision_sum += hits as f64 / (rank + 1) as f64;
                    }
                }
                acc.ap_sum += precision_sum / truths.len() as f64;
                acc.defined += 1;
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Topology score for one scene pair: vertices are matched one-to-one per
/// Fréchet threshold, a confidence matrix is built over ground-truth
/// vertex pairs (unmatched positives drop to zero, unmatched negatives
/// take the penalty), and ranked AP is averaged over thresholds, vertices,
/// and edge directions.
pub fn top_ll(pred: &SceneGraph, gt: &SceneGraph, cfg: &MetricConfig) -> Result<TopologyScore> {
    let accs = top_accumulate(pred, gt, cfg)?;
    let per_threshold: Vec<ThresholdAp> = cfg
        .frechet_thresholds_m
        .iter()
        .zip(&accs)
        .map(|(&t, acc)| ThresholdAp {
            threshold_m: t,
            ap_percent: acc.score_percent(cfg.top_denominator),
        })
        .collect();
    let mut total = TopAccumulator::default();
    for acc in accs {
        total.merge(acc);
    }
    Ok(TopologyScore {
        top_ll_percent: total.score_percent(cfg.top_denominator),
        per_threshold,
    })
}
