//! Raster-to-vector conversion of predicted dense maps into refined
//! grid-space point sets.

use crate::error::Error;
use crate::grid::{GridSpec, QuadDirection, ScalarGrid, VectorGrid};
use crate::Result;

/// Default number of Bézier control points carried by an instance.
pub const DEFAULT_CONTROL_POINTS: usize = 4;

/// All per-query outputs for one centerline instance.
#[derive(Debug, Clone)]
pub struct CenterlineInstance {
    pub direction: QuadDirection,
    pub class_confidence: f64,
    pub prob_map: ScalarGrid,
    pub offset: VectorGrid,
    pub height: ScalarGrid,
    /// World-meter control points of the optional parametric head.
    pub bezier_cp: Option<Vec<[f64; 3]>>,
}

impl CenterlineInstance {
    pub fn new(
        direction: QuadDirection,
        class_confidence: f64,
        prob_map: ScalarGrid,
        offset: VectorGrid,
        height: ScalarGrid,
        bezier_cp: Option<Vec<[f64; 3]>>,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&class_confidence) {
            return Err(Error::invalid("class confidence outside [0, 1]"));
        }
        if prob_map.spec() != offset.spec() || prob_map.spec() != height.spec() {
            return Err(Error::invalid("instance grids must share one spec"));
        }
        if let Some(cp) = &bezier_cp {
            if cp.len() != DEFAULT_CONTROL_POINTS {
                return Err(Error::invalid(format!(
                    "expected {DEFAULT_CONTROL_POINTS} control points, got {}",
                    cp.len()
                )));
            }
            if cp.iter().any(|p| p.iter().any(|v| !v.is_finite())) {
                return Err(Error::invalid("control points must be finite"));
            }
        }
        Ok(CenterlineInstance {
            direction,
            class_confidence,
            prob_map,
            offset,
            height,
            bezier_cp,
        })
    }

    pub fn spec(&self) -> &GridSpec {
        self.prob_map.spec()
    }
}

/// How a grid point set was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Direction-aware expectation only, no refinement.
    Baseline,
    /// Offsets applied to the baseline points (one-to-one).
    SingleProposal,
    /// Offsets applied to every foreground cell (one-to-many).
    MultiProposal,
}

/// Refined points in grid-index space: `(i, j, h_norm)` triples.
///
/// Refined coordinates may leave the grid by up to the offset magnitude;
/// only sampling cells are clamped to the border.
#[derive(Debug, Clone)]
pub struct GridPointSet {
    pub points: Vec<[f64; 3]>,
    pub provenance: Provenance,
}

impl GridPointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Threshold a probability map into a binary mask: `R(i,j) = 1[p ≥ τ]`.
pub fn binarize(prob: &ScalarGrid, tau: f64) -> Result<ScalarGrid> {
    if !(tau.is_finite() && tau > 0.0 && tau < 1.0) {
        return Err(Error::invalid(format!("threshold {tau} outside (0, 1)")));
    }
    let data = prob
        .data()
        .iter()
        .map(|&p| if p >= tau { 1.0 } else { 0.0 })
        .collect();
    ScalarGrid::new(*prob.spec(), data)
}

/// Extract coarse centerpoints by direction-aware expectation.
///
/// `Up`/`Down` emit one point per row with foreground, at the mean
/// foreground column; `Left`/`Right` emit one point per column at the mean
/// foreground row. Rows or columns without foreground are skipped. Heights
/// are left at the 0.5 placeholder.
pub fn expectation_extract(mask: &ScalarGrid, dir: QuadDirection) -> Result<GridPointSet> {
    let spec = mask.spec();
    let mut points = Vec::new();
    if dir.is_vertical() {
        for i in 0..spec.height_cells {
            let mut weighted = 0.0;
            let mut count = 0.0;
            for j in 0..spec.width_cells {
                if mask.get(i, j) > 0.5 {
                    weighted += j as f64;
                    count += 1.0;
                }
            }
            if count > 0.0 {
                points.push([i as f64, weighted / count, 0.5]);
            }
        }
    } else {
        for j in 0..spec.width_cells {
            let mut weighted = 0.0;
            let mut count = 0.0;
            for i in 0..spec.height_cells {
                if mask.get(i, j) > 0.5 {
                    weighted += i as f64;
                    count += 1.0;
                }
            }
            if count > 0.0 {
                points.push([weighted / count, j as f64, 0.5]);
            }
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyMask);
    }
    Ok(GridPointSet {
        points,
        provenance: Provenance::Baseline,
    })
}

/// Refine baseline points one-to-one: each point reads the offset and
/// height at its nearest integer cell (round half up) and moves by that
/// offset. Returns the refined set and the number of points whose sampling
/// cell had to be clamped to the grid border.
pub fn single_point_proposal(
    baseline: &GridPointSet,
    offset: &VectorGrid,
    height: &ScalarGrid,
) -> (GridPointSet, usize) {
    let spec = offset.spec();
    let mut clamped = 0usize;
    let points = baseline
        .points
        .iter()
        .map(|p| {
            let ri = p[0].round();
            let rj = p[1].round();
            let ci = ri.clamp(0.0, (spec.height_cells - 1) as f64);
            let cj = rj.clamp(0.0, (spec.width_cells - 1) as f64);
            if ci != ri || cj != rj {
                clamped += 1;
            }
            let (i, j) = (ci as usize, cj as usize);
            let o = offset.get(i, j);
            [p[0] + o[0], p[1] + o[1], height.get(i, j)]
        })
        .collect();
    (
        GridPointSet {
            points,
            provenance: Provenance::SingleProposal,
        },
        clamped,
    )
}

/// Refine every foreground cell one-to-many: emit
/// `(i + o_i, j + o_j, H(i,j))` for each mask cell, in ascending `(i, j)`
/// order.
pub fn multi_point_proposal(
    mask: &ScalarGrid,
    offset: &VectorGrid,
    height: &ScalarGrid,
) -> Result<GridPointSet> {
    let spec = mask.spec();
    let mut points = Vec::new();
    for i in 0..spec.height_cells {
        for j in 0..spec.width_cells {
            if mask.get(i, j) > 0.5 {
                let o = offset.get(i, j);
                points.push([i as f64 + o[0], j as f64 + o[1], height.get(i, j)]);
            }
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyMask);
    }
    Ok(GridPointSet {
        points,
        provenance: Provenance::MultiProposal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::grid_to_world;
    use crate::polyline::Polyline3D;
    use crate::targets::{target_height_field, target_offset_field};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(h: usize, w: usize) -> GridSpec {
        GridSpec::new(h, w, 0.5, [0.0, 0.0], -10.0, 10.0).unwrap()
    }

    #[test]
    fn binarize_zeros_and_boundary() {
        let s = spec(5, 5);
        let zeros = ScalarGrid::zeros(s);
        let r = binarize(&zeros, 0.5).unwrap();
        assert_eq!(r.foreground_count(), 0);

        let mut prob = ScalarGrid::zeros(s);
        prob.set(2, 2, 0.95);
        let r = binarize(&prob, 0.95).unwrap();
        assert_eq!(r.get(2, 2), 1.0, "value exactly at τ is foreground");

        assert!(binarize(&zeros, 0.0).is_err());
        assert!(binarize(&zeros, 1.0).is_err());
    }

    #[test]
    fn binarize_matches_loop_oracle() {
        let s = spec(9, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut prob = ScalarGrid::zeros(s);
        for i in 0..9 {
            for j in 0..7 {
                prob.set(i, j, rng.random_range(0.0..1.0));
            }
        }
        let r = binarize(&prob, 0.6).unwrap();
        for i in 0..9 {
            for j in 0..7 {
                assert_eq!(r.get(i, j) == 1.0, prob.get(i, j) >= 0.6);
            }
        }
    }

    #[test]
    fn binarize_monotone_in_threshold() {
        let s = spec(12, 12);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut prob = ScalarGrid::zeros(s);
        for i in 0..12 {
            for j in 0..12 {
                prob.set(i, j, rng.random_range(0.0..1.0));
            }
        }
        let lo = binarize(&prob, 0.3).unwrap();
        let hi = binarize(&prob, 0.7).unwrap();
        for (a, b) in lo.data().iter().zip(hi.data()) {
            assert!(b <= a, "foreground at τ=0.7 must be a subset of τ=0.3");
        }
    }

    #[test]
    fn expectation_symmetric_rows() {
        let s = spec(10, 10);
        let mut mask = ScalarGrid::zeros(s);
        for j in [3, 4, 5] {
            mask.set(2, j, 1.0);
        }
        for j in [3, 5] {
            mask.set(4, j, 1.0);
        }
        let pts = expectation_extract(&mask, QuadDirection::Up).unwrap();
        assert_eq!(pts.points.len(), 2);
        assert_eq!(pts.points[0], [2.0, 4.0, 0.5]);
        assert_eq!(pts.points[1], [4.0, 4.0, 0.5]);
    }

    #[test]
    fn expectation_single_cell() {
        let s = spec(10, 10);
        let mut mask = ScalarGrid::zeros(s);
        mask.set(7, 2, 1.0);
        let pts = expectation_extract(&mask, QuadDirection::Up).unwrap();
        assert_eq!(pts.points, vec![[7.0, 2.0, 0.5]]);

        assert!(matches!(
            expectation_extract(&ScalarGrid::zeros(s), QuadDirection::Up),
            Err(Error::EmptyMask)
        ));
    }

    #[test]
    fn expectation_transpose_symmetry() {
        let s = spec(14, 9);
        let st = spec(9, 14);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut mask = ScalarGrid::zeros(s);
        let mut transposed = ScalarGrid::zeros(st);
        for i in 0..14 {
            for j in 0..9 {
                if rng.random_bool(0.25) {
                    mask.set(i, j, 1.0);
                    transposed.set(j, i, 1.0);
                }
            }
        }
        if mask.foreground_count() == 0 {
            return;
        }
        let up = expectation_extract(&mask, QuadDirection::Up).unwrap();
        let right = expectation_extract(&transposed, QuadDirection::Right).unwrap();
        assert_eq!(up.points.len(), right.points.len());
        for (a, b) in up.points.iter().zip(&right.points) {
            assert_eq!(a[0], b[1]);
            assert_eq!(a[1], b[0]);
        }
    }

    #[test]
    fn single_proposal_zero_offset_keeps_points() {
        let s = spec(10, 10);
        let mut mask = ScalarGrid::zeros(s);
        mask.set(5, 4, 1.0);
        let baseline = expectation_extract(&mask, QuadDirection::Up).unwrap();
        let mut height = ScalarGrid::filled(s, 0.5);
        height.set(5, 4, 0.8);
        let (refined, clamped) = single_point_proposal(&baseline, &VectorGrid::zeros(s), &height);
        assert_eq!(clamped, 0);
        assert_eq!(refined.points, vec![[5.0, 4.0, 0.8]]);
        assert_eq!(refined.provenance, Provenance::SingleProposal);
    }

    #[test]
    fn single_proposal_applies_offset_and_height() {
        let s = spec(10, 10);
        let baseline = GridPointSet {
            points: vec![[5.0, 4.0, 0.5]],
            provenance: Provenance::Baseline,
        };
        let mut offset = VectorGrid::zeros(s);
        offset.set(5, 4, [0.0, 0.3]);
        let mut height = ScalarGrid::filled(s, 0.5);
        height.set(5, 4, 0.8);
        let (refined, _) = single_point_proposal(&baseline, &offset, &height);
        let p = refined.points[0];
        assert!((p[0] - 5.0).abs() < 1e-12);
        assert!((p[1] - 4.3).abs() < 1e-12);
        assert!((p[2] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn single_proposal_fractional_column_rounds_half_up() {
        // 3×8 mask, row 1 foreground at columns {4, 5} → ĵ = 4.5, so the
        // sampling cell is (1, 5) by round-half-up.
        let s = spec(3, 8);
        let mut mask = ScalarGrid::zeros(s);
        mask.set(1, 4, 1.0);
        mask.set(1, 5, 1.0);
        let baseline = expectation_extract(&mask, QuadDirection::Up).unwrap();
        assert_eq!(baseline.points, vec![[1.0, 4.5, 0.5]]);

        let mut offset = VectorGrid::zeros(s);
        offset.set(1, 4, [9.0, 9.0]); // must NOT be read
        offset.set(1, 5, [0.25, -0.5]);
        let mut height = ScalarGrid::filled(s, 0.5);
        height.set(1, 5, 0.9);
        let (refined, clamped) = single_point_proposal(&baseline, &offset, &height);
        assert_eq!(clamped, 0);
        let p = refined.points[0];
        assert!((p[0] - 1.25).abs() < 1e-12);
        assert!((p[1] - 4.0).abs() < 1e-12);
        assert!((p[2] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn multi_proposal_single_cell() {
        let s = spec(10, 10);
        let mut mask = ScalarGrid::zeros(s);
        mask.set(3, 3, 1.0);
        let mut offset = VectorGrid::zeros(s);
        offset.set(3, 3, [0.2, -0.4]);
        let mut height = ScalarGrid::filled(s, 0.5);
        height.set(3, 3, 0.6);
        let pts = multi_point_proposal(&mask, &offset, &height).unwrap();
        assert_eq!(pts.points.len(), 1);
        let p = pts.points[0];
        assert!((p[0] - 3.2).abs() < 1e-12);
        assert!((p[1] - 2.6).abs() < 1e-12);
        assert!((p[2] - 0.6).abs() < 1e-12);

        assert!(matches!(
            multi_point_proposal(&ScalarGrid::zeros(s), &offset, &height),
            Err(Error::EmptyMask)
        ));
    }

    #[test]
    fn multi_proposal_cardinality_matches_foreground() {
        let s = spec(20, 20);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut mask = ScalarGrid::zeros(s);
        for i in 0..20 {
            for j in 0..20 {
                if rng.random_bool(0.2) {
                    mask.set(i, j, 1.0);
                }
            }
        }
        let offset = VectorGrid::zeros(s);
        let height = ScalarGrid::filled(s, 0.5);
        if mask.foreground_count() == 0 {
            return;
        }
        let pts = multi_point_proposal(&mask, &offset, &height).unwrap();
        assert_eq!(pts.points.len(), mask.foreground_count());
    }

    #[test]
    fn oracle_offsets_collapse_onto_centerline() {
        // with ground-truth offsets every refined point must land on the
        // continuous curve
        let s = spec(20, 20);
        let world = |g: [f64; 3]| grid_to_world(&s, g).unwrap();
        let c = Polyline3D::new(vec![world([0.0, 4.3, 0.55]), world([19.0, 4.3, 0.55])]).unwrap();
        let (offset, band) = target_offset_field(&c, &s, 4.0).unwrap();
        let height = target_height_field(&c, &s, 4.0).unwrap();

        let pts = multi_point_proposal(&band, &offset, &height).unwrap();
        assert_eq!(pts.points.len(), band.foreground_count());
        for p in &pts.points {
            assert!((p[1] - 4.3).abs() < 1e-6, "refined column {}", p[1]);
            assert!((p[2] - 0.55).abs() < 1e-6, "refined height {}", p[2]);
        }
    }
}
