//! Point-set input files and scene output files.

use std::collections::BTreeMap;
use std::fmt;

use hvd_core::{
    map_point, poincare_to_klein, render_chord, DelaunayComplex, KleinPoint, Model, PoincarePoint,
    Primitive, SceneModel, Vec2,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const TOOL_NAME: &str = "hvd";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Disk model in which input coordinates are given.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputModel {
    Klein,
    Poincare,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointRecord {
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSetFile {
    pub model: InputModel,
    pub points: Vec<PointRecord>,
}

/// A problem with one input record.
#[derive(Clone, Debug, PartialEq)]
pub struct RecordError {
    pub record: usize,
    pub message: String,
}

impl fmt::Display for RecordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "record {}: {}", self.record, self.message)
    }
}

/// Validated input: Klein sites with labels and added power weights.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    pub sites: Vec<KleinPoint>,
    pub labels: Vec<Option<String>>,
    pub weights: Vec<f64>,
}

impl PointSet {
    pub fn is_weighted(&self) -> bool {
        self.weights.iter().any(|&w| w != 0.0)
    }

    pub fn from_klein(sites: Vec<KleinPoint>) -> Self {
        let n = sites.len();
        Self {
            sites,
            labels: vec![None; n],
            weights: vec![0.0; n],
        }
    }
}

impl PointSetFile {
    /// Parses JSON text; syntax errors carry their line and column.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Checks every record and converts to Klein coordinates. All record
    /// problems are reported together.
    pub fn validate(&self) -> Result<PointSet, CliError> {
        let mut errors = Vec::new();
        let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
        let mut set = PointSet {
            sites: Vec::with_capacity(self.points.len()),
            labels: Vec::with_capacity(self.points.len()),
            weights: Vec::with_capacity(self.points.len()),
        };
        if self.points.is_empty() {
            return Err(CliError::EmptyInput);
        }
        for (i, r) in self.points.iter().enumerate() {
            let mut fail = |message: String| {
                errors.push(RecordError { record: i, message });
            };
            let site = match self.model {
                InputModel::Klein => KleinPoint::new(r.x, r.y),
                InputModel::Poincare => PoincarePoint::new(r.x, r.y).map(poincare_to_klein),
            };
            match site {
                Ok(s) => set.sites.push(s),
                Err(e) => fail(e.to_string()),
            }
            if let Some(label) = &r.label {
                if let Some(first) = seen.insert(label, i) {
                    fail(format!("label `{label}` already used by record {first}"));
                }
            }
            let weight = r.weight.unwrap_or(0.0);
            if !weight.is_finite() {
                fail("weight is not finite".to_owned());
            }
            set.labels.push(r.label.clone());
            set.weights.push(weight);
        }
        if errors.is_empty() {
            Ok(set)
        } else {
            Err(CliError::InvalidRecords(errors))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneSite {
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeRole {
    /// Shared by two cells.
    Bisector,
    /// Part of the disk boundary.
    Boundary,
    /// Edge of the Delaunay triangulation.
    Delaunay,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneFileEdge {
    pub role: EdgeRole,
    pub sites: Vec<usize>,
    pub pieces: Vec<Primitive>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<u64>,
}

impl Metadata {
    pub fn new(seed: u64) -> Self {
        Self {
            tool: TOOL_NAME.to_owned(),
            version: TOOL_VERSION.to_owned(),
            seed,
            snapshot: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneFile {
    pub model: Model,
    pub sites: Vec<SceneSite>,
    pub edges: Vec<SceneFileEdge>,
    /// Edge indices of each cell's boundary loop.
    pub cells: Vec<Vec<usize>>,
    /// Triangles of the Delaunay complex; empty for Voronoi scenes.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub triangles: Vec<[usize; 3]>,
    pub metadata: Metadata,
}

fn scene_sites(sites: &[Vec2], labels: &[Option<String>]) -> Vec<SceneSite> {
    sites
        .iter()
        .enumerate()
        .map(|(index, p)| SceneSite {
            index,
            label: labels.get(index).cloned().flatten(),
            x: p.x,
            y: p.y,
        })
        .collect()
}

impl SceneFile {
    pub fn from_scene(scene: SceneModel, labels: &[Option<String>], metadata: Metadata) -> Self {
        let edges = scene
            .edges
            .into_iter()
            .map(|e| SceneFileEdge {
                role: if e.sites.len() == 2 {
                    EdgeRole::Bisector
                } else {
                    EdgeRole::Boundary
                },
                sites: e.sites,
                pieces: e.pieces,
            })
            .collect();
        Self {
            model: scene.model,
            sites: scene_sites(&scene.sites, labels),
            edges,
            cells: scene.cells,
            triangles: Vec::new(),
            metadata,
        }
    }

    /// Delaunay complex with every edge drawn as a geodesic of `model`.
    pub fn from_delaunay(
        tri: &DelaunayComplex,
        sites: &PointSet,
        model: Model,
        metadata: Metadata,
    ) -> Self {
        let points: Vec<Vec2> = sites
            .sites
            .iter()
            .map(|p| map_point(p.to_vec2(), model))
            .collect();
        let edges = tri
            .edges
            .iter()
            .map(|&(i, j)| SceneFileEdge {
                role: EdgeRole::Delaunay,
                sites: vec![i, j],
                pieces: vec![render_chord(
                    sites.sites[i].to_vec2(),
                    sites.sites[j].to_vec2(),
                    model,
                )],
            })
            .collect();
        Self {
            model,
            sites: scene_sites(&points, &sites.labels),
            edges,
            cells: Vec::new(),
            triangles: tri.triangles.clone(),
            metadata,
        }
    }

    /// Every edge index referenced by a cell must exist.
    pub fn check(&self) -> Result<(), CliError> {
        for (c, cell) in self.cells.iter().enumerate() {
            if let Some(&bad) = cell.iter().find(|&&e| e >= self.edges.len()) {
                return Err(CliError::InvalidScene(format!(
                    "cell {c} refers to missing edge {bad}"
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scene values are finite");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let scene: SceneFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        scene.check()?;
        Ok(scene)
    }
}
