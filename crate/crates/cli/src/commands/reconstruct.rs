//! `reconstruct`: dense maps → binarize → proposal → polynomial
//! reconstruction (→ optional Bézier fusion) → scene file.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use centerline_core::bezier::{sample_bezier, BezierCurve};
use centerline_core::extract::{
    binarize, expectation_extract, multi_point_proposal, single_point_proposal, CenterlineInstance,
};
use centerline_core::io::{
    grid_file_name, read_grid, GridKind, ManifestFile, SceneFile, SceneInstance,
};
use centerline_core::polyline::Polyline3D;
use centerline_core::reconstruct::{fuse_outputs, reconstruct_curve, ReconstructionConfig};
use rayon::prelude::*;
use serde::Deserialize;

use crate::config;
use crate::ReconstructArgs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProposalMode {
    Multi,
    Single,
    None,
}

impl ProposalMode {
    fn parse(raw: &str) -> Result<Self> {
        match raw {
            "multi" => Ok(ProposalMode::Multi),
            "single" => Ok(ProposalMode::Single),
            "none" => Ok(ProposalMode::None),
            other => bail!("invalid proposal mode {other:?} (expected multi|single|none)"),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileCfg {
    pred: Option<PathBuf>,
    out: Option<PathBuf>,
    tau: Option<f64>,
    proposal: Option<String>,
    poly_order: Option<usize>,
    points: Option<usize>,
    fuse: Option<bool>,
}

pub struct ReconstructOptions {
    pub tau: f64,
    pub proposal: ProposalMode,
    pub poly_order: usize,
    pub points: usize,
    pub fuse: bool,
}

pub fn run(args: ReconstructArgs) -> Result<u8> {
    let file: FileCfg = config::load(args.config.as_deref())?;
    let pred_dir = config::require(args.pred, file.pred, "pred")?;
    let out = config::pick(args.out, file.out, pred_dir.join("reconstructed.json"));
    let opts = ReconstructOptions {
        tau: config::pick(args.tau, file.tau, 0.95),
        proposal: ProposalMode::parse(&config::pick(
            args.proposal,
            file.proposal,
            "multi".to_string(),
        ))?,
        poly_order: config::pick(args.poly_order, file.poly_order, 4),
        points: config::pick(args.points, file.points, 11),
        fuse: args.fuse || file.fuse.unwrap_or(false),
    };
    reconstruct_dir(&pred_dir, &out, &opts)
}

/// Shared with `demo`. Failed instances are reported and skipped; the run
/// exits 3 when any instance fails, 0 otherwise.
pub fn reconstruct_dir(pred_dir: &Path, out: &Path, opts: &ReconstructOptions) -> Result<u8> {
    let manifest = ManifestFile::load(&pred_dir.join("manifest.json"))
        .with_context(|| format!("loading manifest from {}", pred_dir.display()))?;
    let cfg = ReconstructionConfig {
        path_poly_order: opts.poly_order,
        n_output_points: opts.points,
        ..ReconstructionConfig::default()
    };

    let results: Vec<(u32, Result<Polyline3D>)> = manifest
        .instances
        .par_iter()
        .map(|inst| {
            let polyline = reconstruct_instance(pred_dir, &manifest.spec, inst, opts, &cfg);
            (inst.id, polyline)
        })
        .collect();

    let mut kept = Vec::new();
    let mut failed = Vec::new();
    for ((id, outcome), inst) in results.into_iter().zip(&manifest.instances) {
        match outcome {
            Ok(polyline) => kept.push(SceneInstance {
                id,
                direction: inst.direction,
                confidence: inst.confidence,
                polyline,
                bezier_cp: inst.bezier_cp.clone(),
            }),
            Err(err) => {
                eprintln!("instance {id}: reconstruction failed: {err:#}");
                failed.push(id);
            }
        }
    }

    let kept_ids: HashSet<u32> = kept.iter().map(|i| i.id).collect();
    let scene = SceneFile {
        spec: manifest.spec,
        instances: kept,
        edges: manifest
            .edges
            .iter()
            .filter(|(s, d, _)| kept_ids.contains(s) && kept_ids.contains(d))
            .copied()
            .collect(),
        footprint: manifest.footprint.clone(),
    };
    scene.save(out)?;
    Ok(if failed.is_empty() { 0 } else { 3 })
}

fn reconstruct_instance(
    dir: &Path,
    spec: &centerline_core::grid::GridSpec,
    inst: &centerline_core::io::ManifestInstance,
    opts: &ReconstructOptions,
    cfg: &ReconstructionConfig,
) -> Result<Polyline3D> {
    let id = inst.id;
    let prob = read_grid(&dir.join(grid_file_name(id, GridKind::Mask)))?.into_scalar()?;
    let offset = read_grid(&dir.join(grid_file_name(id, GridKind::Offset)))?.into_vector()?;
    let height = read_grid(&dir.join(grid_file_name(id, GridKind::Height)))?.into_scalar()?;
    // validates confidence range, control-point count, and that all three
    // grids agree on one spec
    let query = CenterlineInstance::new(
        inst.direction,
        inst.confidence,
        prob,
        offset,
        height,
        inst.bezier_cp.clone(),
    )?;
    if query.spec() != spec {
        anyhow::bail!("instance {id}: grid files disagree with the manifest spec");
    }

    let mask = binarize(&query.prob_map, opts.tau)?;
    let points = match opts.proposal {
        ProposalMode::None => expectation_extract(&mask, query.direction)?,
        ProposalMode::Single => {
            let baseline = expectation_extract(&mask, query.direction)?;
            let (refined, clamped) = single_point_proposal(&baseline, &query.offset, &query.height);
            if clamped > 0 {
                eprintln!("instance {id}: {clamped} sampling cells clamped to the grid border");
            }
            refined
        }
        ProposalMode::Multi => multi_point_proposal(&mask, &query.offset, &query.height)?,
    };
    let mask_path = reconstruct_curve(&points, query.direction, spec, cfg)?;

    if opts.fuse {
        if let Some(cp) = &query.bezier_cp {
            let curve = BezierCurve::new(cp.clone())?;
            let bezier_path = sample_bezier(&curve, cfg.n_output_points)?;
            return Ok(fuse_outputs(&mask_path, &bezier_path)?);
        }
    }
    Ok(mask_path)
}
