//! `evaluate`: metric report for a predicted scene against ground truth.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use centerline_core::io::SceneFile;
use centerline_core::metrics::{evaluate_scene_pair, MetricConfig, MetricReport};
use serde::Deserialize;

use crate::config;
use crate::EvaluateArgs;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileCfg {
    pred: Option<PathBuf>,
    gt: Option<PathBuf>,
    ranking_threshold: Option<f64>,
    remap: Option<bool>,
    json: Option<bool>,
}

pub fn run(args: EvaluateArgs) -> Result<u8> {
    let file: FileCfg = config::load(args.config.as_deref())?;
    let pred_path = config::require(args.pred, file.pred, "pred")?;
    let gt_path = config::require(args.gt, file.gt, "gt")?;
    let ranking = config::pick(args.ranking_threshold, file.ranking_threshold, 0.5);
    let remap = args.remap || file.remap.unwrap_or(false);
    let json = args.json || file.json.unwrap_or(false);

    let report = evaluate_files(&pred_path, &gt_path, ranking, remap)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print_table(&report, remap);
    }
    Ok(0)
}

/// Shared with `demo`.
pub fn evaluate_files(
    pred_path: &Path,
    gt_path: &Path,
    ranking_threshold: f64,
    remap: bool,
) -> Result<MetricReport> {
    let pred = SceneFile::load(pred_path)
        .with_context(|| format!("loading prediction {}", pred_path.display()))?;
    let gt = SceneFile::load(gt_path)
        .with_context(|| format!("loading ground truth {}", gt_path.display()))?;

    let cfg = MetricConfig {
        ranking_threshold,
        // the penalty sits just above the threshold so unmatched negatives
        // always enter the ranking as false positives
        unmatched_negative_penalty: ranking_threshold + 1e-3,
        remap_enabled: remap,
        ..MetricConfig::default()
    };

    Ok(evaluate_scene_pair(
        &pred.to_scene_graph()?,
        &gt.to_scene_graph()?,
        &cfg,
    )?)
}

fn print_table(report: &MetricReport, remap: bool) {
    println!("{:<12} {:>10}", "metric", "value");
    println!("{:<12} {:>10.3}", "DET_l", report.det_l);
    for t in &report.det_l_per_threshold {
        println!(
            "  @ {:<8} {:>10.3}",
            format!("{:.1} m", t.threshold_m),
            t.ap_percent
        );
    }
    println!("{:<12} {:>10.3}", "DET_l_ch", report.det_l_ch);
    for t in &report.det_l_ch_per_threshold {
        println!(
            "  @ {:<8} {:>10.3}",
            format!("{:.1} m", t.threshold_m),
            t.ap_percent
        );
    }
    println!("{:<12} {:>10.3}", "TOP_ll", report.top_ll);
    if remap {
        println!("  {:<10} {:>10.3}", "flawed", report.top_ll_flawed);
        println!("  {:<10} {:>10.3}", "fixed", report.top_ll_fixed);
        println!("  {:<10} {:>10.3}", "remapped", report.top_ll_remapped);
    }
    println!("{:<12} {:>10.3}", "OLS_l", report.ols_l);
}
