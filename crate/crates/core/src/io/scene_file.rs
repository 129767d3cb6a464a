//! JSON scene documents: ground-truth/prediction scenes with polylines,
//! and the slim manifest that accompanies per-instance grid files.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::extract::DEFAULT_CONTROL_POINTS;
use crate::grid::{GridSpec, QuadDirection};
use crate::metrics::{Footprint, SceneEdge, SceneGraph, SceneVertex};
use crate::polyline::Polyline3D;
use crate::Result;

/// One centerline instance of a scene document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneInstance {
    pub id: u32,
    pub direction: QuadDirection,
    pub confidence: f64,
    pub polyline: Polyline3D,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bezier_cp: Option<Vec<[f64; 3]>>,
}

/// A full scene: grid spec, centerline instances, directed topology
/// edges, and an optional geographic footprint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneFile {
    pub spec: GridSpec,
    pub instances: Vec<SceneInstance>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<(u32, u32, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub footprint: Option<Footprint>,
}

impl SceneFile {
    pub fn validate(&self) -> Result<()> {
        let mut ids = std::collections::HashSet::new();
        for inst in &self.instances {
            if !ids.insert(inst.id) {
                return Err(Error::Format(format!("duplicate instance id {}", inst.id)));
            }
            if !(0.0..=1.0).contains(&inst.confidence) {
                return Err(Error::Format(format!(
                    "instance {} confidence outside [0, 1]",
                    inst.id
                )));
            }
            if let Some(cp) = &inst.bezier_cp {
                if cp.len() != DEFAULT_CONTROL_POINTS {
                    return Err(Error::Format(format!(
                        "instance {} has {} control points, expected {DEFAULT_CONTROL_POINTS}",
                        inst.id,
                        cp.len()
                    )));
                }
            }
        }
        for &(src, dst, conf) in &self.edges {
            if src == dst {
                return Err(Error::Format(format!("self-loop on instance {src}")));
            }
            if !ids.contains(&src) || !ids.contains(&dst) {
                return Err(Error::Format(format!(
                    "edge ({src}, {dst}) references a missing instance"
                )));
            }
            if !(0.0..=1.0).contains(&conf) {
                return Err(Error::Format("edge confidence outside [0, 1]".into()));
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<SceneFile> {
        let text = fs::read_to_string(path)?;
        let scene: SceneFile = serde_json::from_str(&text)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        scene.validate()?;
        Ok(scene)
    }

    /// Canonical serialization: pretty-printed JSON with a trailing
    /// newline. Loading and saving reproduces the file byte-for-byte.
    pub fn save(&self, path: &Path) -> Result<()> {
        self.validate()?;
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Format(format!("scene serialization failed: {e}")))?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    pub fn to_scene_graph(&self) -> Result<SceneGraph> {
        SceneGraph::new(
            self.instances
                .iter()
                .map(|i| SceneVertex {
                    id: i.id,
                    polyline: i.polyline.clone(),
                    confidence: i.confidence,
                })
                .collect(),
            self.edges
                .iter()
                .map(|&(src, dst, confidence)| SceneEdge {
                    src,
                    dst,
                    confidence,
                })
                .collect(),
        )
    }
}

/// Manifest entry describing one instance whose dense maps live in
/// sibling grid files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestInstance {
    pub id: u32,
    pub direction: QuadDirection,
    pub confidence: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bezier_cp: Option<Vec<[f64; 3]>>,
}

/// Manifest written next to per-instance grid files; carries everything
/// the reconstruction stage needs except the dense maps themselves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestFile {
    pub spec: GridSpec,
    pub instances: Vec<ManifestInstance>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<(u32, u32, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub footprint: Option<Footprint>,
}

impl ManifestFile {
    pub fn load(path: &Path) -> Result<ManifestFile> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Format(format!("manifest serialization failed: {e}")))?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }
}

/// Kinds of per-instance dense maps stored as grid files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Mask,
    Offset,
    Height,
    Band,
}

impl GridKind {
    pub fn suffix(self) -> &'static str {
        match self {
            GridKind::Mask => "mask",
            GridKind::Offset => "offset",
            GridKind::Height => "height",
            GridKind::Band => "band",
        }
    }
}

/// Conventional file name for one instance's dense map.
pub fn grid_file_name(id: u32, kind: GridKind) -> String {
    format!("inst_{id:04}_{}.grid", kind.suffix())
}
