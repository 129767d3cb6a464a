//! BEV grid geometry: grid specification, dense scalar/vector fields, and
//! the grid↔world affine transform.
//!
//! Convention: row index `i` runs along the world forward axis `x`, column
//! index `j` along the lateral axis `y`. `origin_world` is the world
//! position of the *center* of cell `(0, 0)`. Normalized heights map the
//! `[z_min, z_max]` range linearly onto `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Geometry of a dense BEV grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Number of rows (index `i`).
    pub height_cells: usize,
    /// Number of columns (index `j`).
    pub width_cells: usize,
    /// Edge length of one square cell in meters.
    pub cell_size_m: f64,
    /// World `(x, y)` of the center of cell `(0, 0)`, in meters.
    pub origin_world: [f64; 2],
    /// Lower bound of the height-normalization range, meters.
    pub z_min_m: f64,
    /// Upper bound of the height-normalization range, meters.
    pub z_max_m: f64,
}

impl GridSpec {
    pub fn new(
        height_cells: usize,
        width_cells: usize,
        cell_size_m: f64,
        origin_world: [f64; 2],
        z_min_m: f64,
        z_max_m: f64,
    ) -> Result<Self> {
        if height_cells == 0 || width_cells == 0 {
            return Err(Error::invalid("grid dimensions must be positive"));
        }
        if !(cell_size_m.is_finite() && cell_size_m > 0.0) {
            return Err(Error::invalid("cell size must be positive and finite"));
        }
        if !(origin_world[0].is_finite() && origin_world[1].is_finite()) {
            return Err(Error::invalid("grid origin must be finite"));
        }
        if !(z_min_m.is_finite() && z_max_m.is_finite() && z_max_m > z_min_m) {
            return Err(Error::invalid("z range must be finite with z_max > z_min"));
        }
        Ok(GridSpec {
            height_cells,
            width_cells,
            cell_size_m,
            origin_world,
            z_min_m,
            z_max_m,
        })
    }

    /// The standard 200×104 grid at 0.5 m resolution, centered on the ego
    /// vehicle (x ∈ [−50, 50], y ∈ [−26, 26]), heights normalized over
    /// [−10, 10] m.
    pub fn bev_default() -> Self {
        GridSpec {
            height_cells: 200,
            width_cells: 104,
            cell_size_m: 0.5,
            origin_world: [-49.75, -25.75],
            z_min_m: -10.0,
            z_max_m: 10.0,
        }
    }

    pub fn cell_count(&self) -> usize {
        self.height_cells * self.width_cells
    }

    /// Normalize a world height into `[0, 1]` over the configured z range.
    pub fn normalize_height(&self, z_m: f64) -> f64 {
        (z_m - self.z_min_m) / (self.z_max_m - self.z_min_m)
    }

    /// Inverse of [`GridSpec::normalize_height`].
    pub fn denormalize_height(&self, h_norm: f64) -> f64 {
        self.z_min_m + h_norm * (self.z_max_m - self.z_min_m)
    }

    /// World `x` extent covered by cell centers, `[x(0), x(H-1)]`.
    pub fn x_extent(&self) -> [f64; 2] {
        [
            self.origin_world[0],
            self.origin_world[0] + (self.height_cells - 1) as f64 * self.cell_size_m,
        ]
    }

    /// World `y` extent covered by cell centers, `[y(0), y(W-1)]`.
    pub fn y_extent(&self) -> [f64; 2] {
        [
            self.origin_world[1],
            self.origin_world[1] + (self.width_cells - 1) as f64 * self.cell_size_m,
        ]
    }
}

/// Coarse flow direction of a centerline instance. Selects the expectation
/// axis during extraction, the independent fit variable during
/// reconstruction, and the final point ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadDirection {
    Up,
    Down,
    Left,
    Right,
}

impl QuadDirection {
    /// Classify a planar delta into its direction sector.
    ///
    /// Forward-dominant deltas (`|Δx| ≥ |Δy|`) are `Up`/`Down` by the sign
    /// of `Δx`; lateral-dominant deltas are `Right` for `Δy > 0`, `Left`
    /// otherwise.
    pub fn from_delta(dx: f64, dy: f64) -> Self {
        if dx.abs() >= dy.abs() {
            if dx > 0.0 {
                QuadDirection::Up
            } else {
                QuadDirection::Down
            }
        } else if dy > 0.0 {
            QuadDirection::Right
        } else {
            QuadDirection::Left
        }
    }

    /// True for `Up`/`Down`, whose expectation runs row-wise and whose
    /// independent fit variable is world `x`.
    pub fn is_vertical(self) -> bool {
        matches!(self, QuadDirection::Up | QuadDirection::Down)
    }
}

/// Map fractional grid coordinates `(i, j, h_norm)` to world meters.
///
/// Out-of-range indices extrapolate linearly; only non-finite input is
/// rejected.
pub fn grid_to_world(spec: &GridSpec, p: [f64; 3]) -> Result<[f64; 3]> {
    if p.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("grid coordinate must be finite"));
    }
    Ok([
        spec.origin_world[0] + p[0] * spec.cell_size_m,
        spec.origin_world[1] + p[1] * spec.cell_size_m,
        spec.denormalize_height(p[2]),
    ])
}

/// Exact inverse of [`grid_to_world`].
pub fn world_to_grid(spec: &GridSpec, p: [f64; 3]) -> Result<[f64; 3]> {
    if p.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("world coordinate must be finite"));
    }
    Ok([
        (p[0] - spec.origin_world[0]) / spec.cell_size_m,
        (p[1] - spec.origin_world[1]) / spec.cell_size_m,
        spec.normalize_height(p[2]),
    ])
}

/// Dense H×W scalar field over a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarGrid {
    spec: GridSpec,
    data: Vec<f64>,
}

impl ScalarGrid {
    pub fn new(spec: GridSpec, data: Vec<f64>) -> Result<Self> {
        if data.len() != spec.cell_count() {
            return Err(Error::invalid(format!(
                "scalar grid needs {} values, got {}",
                spec.cell_count(),
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("scalar grid values must be finite"));
        }
        Ok(ScalarGrid { spec, data })
    }

    pub fn zeros(spec: GridSpec) -> Self {
        ScalarGrid {
            data: vec![0.0; spec.cell_count()],
            spec,
        }
    }

    pub fn filled(spec: GridSpec, value: f64) -> Self {
        ScalarGrid {
            data: vec![value; spec.cell_count()],
            spec,
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.spec.width_cells + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.spec.width_cells + j] = value;
    }

    /// Row-major backing storage.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Number of cells with value > 0.5 (foreground of a binary grid).
    pub fn foreground_count(&self) -> usize {
        self.data.iter().filter(|&&v| v > 0.5).count()
    }

    /// True if every value is 0 or 1.
    pub fn is_binary(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    /// True if every value lies in `[0, 1]`.
    pub fn is_probability(&self) -> bool {
        self.data.iter().all(|&v| (0.0..=1.0).contains(&v))
    }
}

/// Dense H×W two-channel field; channel 0 is the row (`Δi`) component,
/// channel 1 the column (`Δj`) component.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorGrid {
    spec: GridSpec,
    data: Vec<[f64; 2]>,
}

impl VectorGrid {
    pub fn new(spec: GridSpec, data: Vec<[f64; 2]>) -> Result<Self> {
        if data.len() != spec.cell_count() {
            return Err(Error::invalid(format!(
                "vector grid needs {} cells, got {}",
                spec.cell_count(),
                data.len()
            )));
        }
        if data.iter().any(|v| !v[0].is_finite() || !v[1].is_finite()) {
            return Err(Error::invalid("vector grid values must be finite"));
        }
        Ok(VectorGrid { spec, data })
    }

    pub fn zeros(spec: GridSpec) -> Self {
        VectorGrid {
            data: vec![[0.0; 2]; spec.cell_count()],
            spec,
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn get(&self, i: usize, j: usize) -> [f64; 2] {
        self.data[i * self.spec.width_cells + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: [f64; 2]) {
        self.data[i * self.spec.width_cells + j] = value;
    }

    pub fn data(&self) -> &[[f64; 2]] {
        &self.data
    }
}
