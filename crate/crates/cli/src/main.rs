//! `centerline` — BEV centerline post-processing and evaluation pipeline.
//!
//! Subcommands:
//! - `targets`     supervision targets from a ground-truth scene
//! - `reconstruct` dense prediction maps → vector centerlines
//! - `evaluate`    detection / topology / OLS metric report
//! - `split-audit` geographic disjointness check between scene sets
//! - `demo`        seeded synthetic end-to-end run
//!
//! Exit codes: 0 success, 1 semantic negative (overlap found), 2 input or
//! format error, 3 partial success (some instances failed).

use std::process::ExitCode;

use centerline_cli::{
    commands, DemoArgs, EvaluateArgs, ReconstructArgs, SplitAuditArgs, TargetsArgs,
};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "centerline",
    version,
    about = "Mask-based 3D centerline pipeline and road-topology metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate supervision targets (mask, offset, height, band) from a
    /// ground-truth scene.
    Targets(TargetsArgs),
    /// Reconstruct vector centerlines from dense prediction maps.
    Reconstruct(ReconstructArgs),
    /// Evaluate a predicted scene against ground truth.
    Evaluate(EvaluateArgs),
    /// Audit train/val scene footprints for geographic overlap.
    SplitAudit(SplitAuditArgs),
    /// Run a seeded synthetic scene through the full pipeline.
    Demo(DemoArgs),
}

fn init_thread_pool() {
    if let Ok(raw) = std::env::var("CENTERLINE_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => eprintln!("warning: ignoring invalid CENTERLINE_THREADS={raw:?}"),
        }
    }
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Targets(args) => commands::targets::run(args),
        Command::Reconstruct(args) => commands::reconstruct::run(args),
        Command::Evaluate(args) => commands::evaluate::run(args),
        Command::SplitAudit(args) => commands::split_audit::run(args),
        Command::Demo(args) => commands::demo::run(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
