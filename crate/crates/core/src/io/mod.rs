//! File formats shared with the CLI: dense grid files and JSON scene
//! documents.

mod grid_file;
mod scene_file;

pub use grid_file::{read_grid, write_scalar, write_vector, GridData, GridFileHeader};
pub use scene_file::{
    grid_file_name, GridKind, ManifestFile, ManifestInstance, SceneFile, SceneInstance,
};
