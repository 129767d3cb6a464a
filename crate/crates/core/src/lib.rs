//! Mask-based 3D centerline post-processing and road-topology evaluation.
//!
//! The crate covers the full path from dense BEV grid predictions to scored
//! vector output:
//!
//! 1. **grid / polyline** – BEV grid geometry, grid↔world transforms, 3D
//!    polylines with projection and arc-length resampling.
//! 2. **targets** – supervision targets from ground-truth centerlines
//!    (rasterized masks, dense offset and height fields, foreground bands)
//!    plus the associated loss terms and matcher cost.
//! 3. **extract** – raster-to-vector conversion: binarization,
//!    direction-aware expectation, single-/multi-point offset proposals.
//! 4. **reconstruct** – polynomial path and height-surface fitting,
//!    arc-length resampling, directional ordering, mask/Bézier fusion.
//! 5. **bezier** – Bézier evaluation and sampling for the parametric path.
//! 6. **metrics** – Fréchet/Chamfer detection mAP, lane-to-lane topology AP
//!    with ranking-threshold analysis and score remapping, combined OLS
//!    score, geographic-split overlap auditing.
//! 7. **io** – grid and scene file formats shared with the CLI.
//!
//! All types are immutable after construction and all operations are pure
//! functions, so everything here is safe to call from multiple threads.

pub mod bezier;
pub mod error;
pub mod extract;
pub mod grid;
pub mod io;
pub mod metrics;
pub mod polyline;
pub mod reconstruct;
pub mod targets;

pub use error::Error;
pub use grid::{GridSpec, QuadDirection, ScalarGrid, VectorGrid};
pub use polyline::Polyline3D;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
