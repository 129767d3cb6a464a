//! Road-topology evaluation: curve distances, optimal assignment,
//! detection mAP, lane-to-lane topology AP, combined OLS score, and
//! geographic-split overlap auditing.

mod assignment;
mod detection;
mod distance;
mod overlap;
mod report;
mod topology;

pub use assignment::{assignment_cost, hungarian};
pub use detection::{det_score, det_score_with, DetMatching, DetScore, DistanceKind, ThresholdAp};
pub use distance::{chamfer, discrete_frechet};
pub use overlap::{audit_geographic_overlap, Footprint, OverlapReport};
pub use report::{evaluate_corpus, evaluate_scene_pair, ols_l, MetricReport, SceneBreakdown};
pub use topology::{score_remap, top_ll, TopologyScore};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::polyline::Polyline3D;
use crate::Result;

/// One detected or ground-truth centerline vertex of a scene graph.
#[derive(Debug, Clone)]
pub struct SceneVertex {
    pub id: u32,
    pub polyline: Polyline3D,
    pub confidence: f64,
}

/// Directed lane-to-lane connection with its predicted confidence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneEdge {
    pub src: u32,
    pub dst: u32,
    pub confidence: f64,
}

/// Centerline vertices plus directed adjacency with per-edge confidence.
#[derive(Debug, Clone)]
pub struct SceneGraph {
    vertices: Vec<SceneVertex>,
    edges: Vec<SceneEdge>,
}

impl SceneGraph {
    pub fn new(vertices: Vec<SceneVertex>, edges: Vec<SceneEdge>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for v in &vertices {
            if !seen.insert(v.id) {
                return Err(Error::invalid(format!("duplicate vertex id {}", v.id)));
            }
            if !(0.0..=1.0).contains(&v.confidence) {
                return Err(Error::invalid("vertex confidence outside [0, 1]"));
            }
        }
        for e in &edges {
            if e.src == e.dst {
                return Err(Error::invalid(format!("self-loop on vertex {}", e.src)));
            }
            if !seen.contains(&e.src) || !seen.contains(&e.dst) {
                return Err(Error::invalid(format!(
                    "edge ({}, {}) references a missing vertex",
                    e.src, e.dst
                )));
            }
            if !(0.0..=1.0).contains(&e.confidence) {
                return Err(Error::invalid("edge confidence outside [0, 1]"));
            }
        }
        Ok(SceneGraph { vertices, edges })
    }

    pub fn empty() -> Self {
        SceneGraph {
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn vertices(&self) -> &[SceneVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[SceneEdge] {
        &self.edges
    }
}

/// Denominator convention for the topology score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopDenominator {
    /// Average over (vertex, direction, threshold) triples with at least
    /// one ground-truth neighbor.
    Defined,
    /// Divide by `2·|Θ|·|V|`, counting undefined APs as zero.
    Strict,
}

/// All evaluation knobs in one place.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    /// Fréchet matching thresholds for `DET_l` and vertex matching, meters.
    pub frechet_thresholds_m: Vec<f64>,
    /// Chamfer matching thresholds for `DET_l_ch`, meters.
    pub chamfer_thresholds_m: Vec<f64>,
    /// Minimum confidence for an edge to be ranked in the topology AP.
    pub ranking_threshold: f64,
    /// Confidence assigned to unmatched ground-truth-negative edges.
    pub unmatched_negative_penalty: f64,
    /// Apply score remapping to predicted edge confidences.
    pub remap_enabled: bool,
    /// Remap floor: confidences above it receive the bonus.
    pub remap_floor: f64,
    /// Remap bonus added above the floor.
    pub remap_bonus: f64,
    /// Common arc-length resample count for curve distances.
    pub eval_sample_points: usize,
    /// Denominator convention for the topology score.
    pub top_denominator: TopDenominator,
    /// Detection matching mode.
    pub det_matching: DetMatching,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            frechet_thresholds_m: vec![1.0, 2.0, 3.0],
            chamfer_thresholds_m: vec![0.5, 1.0, 1.5],
            ranking_threshold: 0.5,
            unmatched_negative_penalty: 0.5 + 1e-3,
            remap_enabled: false,
            remap_floor: 0.05,
            remap_bonus: 1.0,
            eval_sample_points: 11,
            top_denominator: TopDenominator::Defined,
            det_matching: DetMatching::Greedy,
        }
    }
}

impl MetricConfig {
    /// The stock configuration with the 0.5 ranking threshold.
    pub fn flawed() -> Self {
        MetricConfig::default()
    }

    /// Near-zero ranking threshold, with the penalty lowered to match.
    pub fn fixed() -> Self {
        MetricConfig {
            ranking_threshold: 0.01,
            unmatched_negative_penalty: 0.01 + 1e-3,
            ..MetricConfig::default()
        }
    }

    /// Stock thresholds with score remapping enabled.
    pub fn remapped() -> Self {
        MetricConfig {
            remap_enabled: true,
            ..MetricConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for set in [&self.frechet_thresholds_m, &self.chamfer_thresholds_m] {
            if set.is_empty() {
                return Err(Error::invalid("threshold set must not be empty"));
            }
            if set.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
                return Err(Error::invalid("thresholds must be positive"));
            }
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid("thresholds must be strictly ascending"));
            }
        }
        if !(0.0..1.0).contains(&self.ranking_threshold) {
            return Err(Error::invalid("ranking threshold outside [0, 1)"));
        }
        if self.eval_sample_points < 2 {
            return Err(Error::invalid("evaluation sample count must be at least 2"));
        }
        Ok(())
    }
}
