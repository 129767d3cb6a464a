//! `split-audit`: geographic disjointness verdict over scene footprints.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use centerline_core::io::SceneFile;
use centerline_core::metrics::{audit_geographic_overlap, Footprint};
use serde::Deserialize;

use crate::config;
use crate::SplitAuditArgs;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileCfg {
    train: Option<Vec<PathBuf>>,
    val: Option<Vec<PathBuf>>,
}

pub fn run(args: SplitAuditArgs) -> Result<u8> {
    let file: FileCfg = config::load(args.config.as_deref())?;
    let train = if args.train.is_empty() {
        file.train.unwrap_or_default()
    } else {
        args.train
    };
    let val = if args.val.is_empty() {
        file.val.unwrap_or_default()
    } else {
        args.val
    };
    if train.is_empty() || val.is_empty() {
        bail!("both --train and --val need at least one scene file");
    }

    let train_fp = load_footprints(&train)?;
    let val_fp = load_footprints(&val)?;
    let report = audit_geographic_overlap(&train_fp, &val_fp);

    println!(
        "geographic split: {}",
        if report.disjoint {
            "DISJOINT"
        } else {
            "OVERLAPPING"
        }
    );
    println!("intersecting pairs: {}", report.intersecting_pairs);
    println!(
        "total intersection area: {:.6} m^2",
        report.total_intersection_area_m2
    );
    Ok(if report.disjoint { 0 } else { 1 })
}

fn load_footprints(paths: &[PathBuf]) -> Result<Vec<Footprint>> {
    paths.iter().map(|p| footprint_of(p)).collect()
}

fn footprint_of(path: &Path) -> Result<Footprint> {
    let scene =
        SceneFile::load(path).with_context(|| format!("loading scene {}", path.display()))?;
    scene
        .footprint
        .with_context(|| format!("{}: scene has no footprint", path.display()))
}
