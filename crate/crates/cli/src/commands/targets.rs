//! `targets`: per-instance supervision grids plus a manifest.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use centerline_core::io::{
    grid_file_name, write_scalar, write_vector, GridKind, ManifestFile, ManifestInstance, SceneFile,
};
use centerline_core::targets::TargetBundle;
use rayon::prelude::*;
use serde::Deserialize;

use crate::config;
use crate::TargetsArgs;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileCfg {
    gt: Option<PathBuf>,
    out: Option<PathBuf>,
    width: Option<u32>,
    band: Option<f64>,
}

pub fn run(args: TargetsArgs) -> Result<u8> {
    let file: FileCfg = config::load(args.config.as_deref())?;
    let gt_path = config::require(args.gt, file.gt, "gt")?;
    let out_dir = config::require(args.out, file.out, "out")?;
    let width = config::pick(args.width, file.width, 4);
    let band = config::pick(args.band, file.band, 4.0);

    let scene = SceneFile::load(&gt_path)
        .with_context(|| format!("loading scene {}", gt_path.display()))?;
    write_targets(&scene, &out_dir, width, band)
}

/// Shared with `demo`. Writes one mask/offset/height/band quadruple per
/// instance, then the manifest as the commit point. Instances whose
/// centerline misses the grid entirely are reported and yield exit 3.
pub fn write_targets(scene: &SceneFile, out_dir: &Path, width: u32, band: f64) -> Result<u8> {
    if scene.instances.is_empty() {
        eprintln!("warning: scene has no instances; nothing to write");
        return Ok(0);
    }
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;

    let results: Vec<(u32, bool)> = scene
        .instances
        .par_iter()
        .map(|inst| -> Result<(u32, bool)> {
            let bundle = TargetBundle::generate(&inst.polyline, &scene.spec, width, band)?;
            write_scalar(
                &out_dir.join(grid_file_name(inst.id, GridKind::Mask)),
                &bundle.mask,
            )?;
            write_vector(
                &out_dir.join(grid_file_name(inst.id, GridKind::Offset)),
                &bundle.offset,
            )?;
            write_scalar(
                &out_dir.join(grid_file_name(inst.id, GridKind::Height)),
                &bundle.height,
            )?;
            write_scalar(
                &out_dir.join(grid_file_name(inst.id, GridKind::Band)),
                &bundle.fg_band,
            )?;
            Ok((inst.id, bundle.is_empty_mask()))
        })
        .collect::<Result<_>>()?;

    let manifest = ManifestFile {
        spec: scene.spec,
        instances: scene
            .instances
            .iter()
            .map(|i| ManifestInstance {
                id: i.id,
                direction: i.direction,
                confidence: i.confidence,
                bezier_cp: i.bezier_cp.clone(),
            })
            .collect(),
        edges: scene.edges.clone(),
        footprint: scene.footprint.clone(),
    };
    manifest.save(&out_dir.join("manifest.json"))?;

    let empty: Vec<u32> = results
        .iter()
        .filter(|(_, e)| *e)
        .map(|(id, _)| *id)
        .collect();
    if empty.is_empty() {
        Ok(0)
    } else {
        for id in &empty {
            eprintln!("instance {id}: centerline entirely outside the grid (empty mask)");
        }
        Ok(3)
    }
}
