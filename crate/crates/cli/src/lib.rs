//! Library surface of the `centerline` binary: argument types, command
//! implementations, and the synthetic scene generator. Kept as a library
//! so integration tests can drive the same code paths in-process.

pub mod commands;
pub mod config;
pub mod synth;

use std::path::PathBuf;

use clap::Args;

#[derive(Args, Debug, Default)]
pub struct TargetsArgs {
    /// Ground-truth scene file.
    #[arg(long)]
    pub gt: Option<PathBuf>,
    /// Output directory for grid files and the manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Rasterized mask width in cells.
    #[arg(long)]
    pub width: Option<u32>,
    /// Supervision band radius in cells.
    #[arg(long)]
    pub band: Option<f64>,
    /// JSON file with defaults for the flags above (flags win).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct ReconstructArgs {
    /// Directory with a manifest and per-instance grid files.
    #[arg(long)]
    pub pred: Option<PathBuf>,
    /// Output scene file (default: `reconstructed.json` inside --pred).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Mask binarization threshold.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Offset refinement: multi, single, or none.
    #[arg(long)]
    pub proposal: Option<String>,
    /// Path polynomial order.
    #[arg(long)]
    pub poly_order: Option<usize>,
    /// Output points per centerline.
    #[arg(long)]
    pub points: Option<usize>,
    /// Fuse the mask path with the sampled Bézier path when control
    /// points are present.
    #[arg(long)]
    pub fuse: bool,
    /// JSON file with defaults for the flags above (flags win).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct EvaluateArgs {
    /// Predicted scene file.
    #[arg(long)]
    pub pred: Option<PathBuf>,
    /// Ground-truth scene file.
    #[arg(long)]
    pub gt: Option<PathBuf>,
    /// Topology ranking threshold (0.5 stock, 0.01 fixed).
    #[arg(long)]
    pub ranking_threshold: Option<f64>,
    /// Enable score remapping and print all topology variants.
    #[arg(long)]
    pub remap: bool,
    /// Emit the report as JSON instead of a table.
    #[arg(long)]
    pub json: bool,
    /// JSON file with defaults for the flags above (flags win).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct SplitAuditArgs {
    /// Training scene files.
    #[arg(long, num_args = 1..)]
    pub train: Vec<PathBuf>,
    /// Validation scene files.
    #[arg(long, num_args = 1..)]
    pub val: Vec<PathBuf>,
    /// JSON file with defaults for the flags above (flags win).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct DemoArgs {
    /// RNG seed; identical seeds produce byte-identical output trees.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with defaults for the flags above (flags win).
    #[arg(long)]
    pub config: Option<PathBuf>,
}
