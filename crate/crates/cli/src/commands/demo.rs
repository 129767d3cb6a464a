//! `demo`: seeded synthetic scene through targets → reconstruct →
//! evaluate, with plot-ready point dumps.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use centerline_core::grid::GridSpec;
use centerline_core::io::SceneFile;
use serde::Deserialize;

use crate::commands::reconstruct::{reconstruct_dir, ProposalMode, ReconstructOptions};
use crate::commands::{evaluate, targets};
use crate::config;
use crate::synth::synthetic_scene;
use crate::DemoArgs;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileCfg {
    seed: Option<u64>,
    out: Option<PathBuf>,
}

const INSTANCE_COUNT: usize = 6;

pub fn run(args: DemoArgs) -> Result<u8> {
    let file: FileCfg = config::load(args.config.as_deref())?;
    let seed = config::pick(args.seed, file.seed, 7);
    let out = config::require(args.out, file.out, "out")?;
    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;

    let spec = GridSpec::bev_default();
    let scene = synthetic_scene(&spec, seed, INSTANCE_COUNT);
    let gt_path = out.join("gt.json");
    scene.save(&gt_path)?;

    let targets_dir = out.join("targets");
    let code = targets::write_targets(&scene, &targets_dir, 4, 4.0)?;
    if code != 0 {
        return Ok(code);
    }

    let pred_path = out.join("reconstructed.json");
    let opts = ReconstructOptions {
        tau: 0.95,
        proposal: ProposalMode::Multi,
        poly_order: 4,
        points: 11,
        fuse: true,
    };
    let code = reconstruct_dir(&targets_dir, &pred_path, &opts)?;
    if code != 0 {
        return Ok(code);
    }

    let report = evaluate::evaluate_files(&pred_path, &gt_path, 0.5, true)?;
    let mut report_json = serde_json::to_string_pretty(&report)?;
    report_json.push('\n');
    fs::write(out.join("report.json"), report_json)?;
    println!(
        "demo seed {seed}: DET_l {:.3}  DET_l_ch {:.3}  TOP_ll {:.3}  OLS_l {:.3}",
        report.det_l, report.det_l_ch, report.top_ll, report.ols_l
    );

    write_dumps(&out, &scene, &SceneFile::load(&pred_path)?)?;
    Ok(0)
}

/// One `x y z` text file per curve, for external plotting.
fn write_dumps(out: &Path, gt: &SceneFile, pred: &SceneFile) -> Result<()> {
    let dumps = out.join("dumps");
    fs::create_dir_all(&dumps)?;
    for (scene, tag) in [(gt, "gt"), (pred, "pred")] {
        for inst in &scene.instances {
            let mut text = String::new();
            for p in inst.polyline.points() {
                writeln!(text, "{:.6} {:.6} {:.6}", p[0], p[1], p[2])?;
            }
            fs::write(dumps.join(format!("curve_{:04}_{tag}.xyz", inst.id)), text)?;
        }
    }
    Ok(())
}
