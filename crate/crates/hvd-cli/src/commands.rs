//! The `diagram`, `delaunay` and `seb` commands as library calls.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use hvd_core::{
    build_hyperbolic_voronoi, build_weighted_voronoi, delaunay_complex, disk_to_halfplane,
    halfplane_to_disk, klein_to_poincare, poincare_to_klein, render_scene, smallest_enclosing_ball,
    DelaunayComplex, Error, HalfPlanePoint, HyperbolicVoronoiDiagram, KleinPoint, MobiusTransform,
    Model, PoincarePoint, Vec2,
};
use serde::{Deserialize, Serialize};

use crate::formats::{Metadata, PointSet, SceneFile};
use crate::svg::{self, Canvas};
use crate::CliError;

/// Number of boundary samples in a ball overlay.
pub const OVERLAY_SAMPLES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(format!("unknown format `{other}` (expected json or svg)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Svg => "svg",
        })
    }
}

/// Converts a point given in `model` coordinates to the Klein disk.
pub fn model_to_klein(p: Vec2, model: Model) -> Result<KleinPoint, Error> {
    match model {
        Model::Klein => KleinPoint::new(p.x, p.y),
        Model::Poincare => PoincarePoint::new(p.x, p.y).map(poincare_to_klein),
        Model::HalfPlane => {
            let z = halfplane_to_disk(HalfPlanePoint::new(p.x, p.y)?)?;
            Ok(poincare_to_klein(z))
        }
    }
}

fn poincare_to_model(z: PoincarePoint, model: Model) -> Vec2 {
    match model {
        Model::Klein => poincare_to_klein(z).to_vec2(),
        Model::Poincare => z.to_vec2(),
        Model::HalfPlane => disk_to_halfplane(z).to_vec2(),
    }
}

/// Builds the diagram of a point set, using its weights when any is nonzero.
pub fn build_diagram(set: &PointSet) -> Result<HyperbolicVoronoiDiagram, Error> {
    if set.is_weighted() {
        build_weighted_voronoi(&set.sites, &set.weights)
    } else {
        build_hyperbolic_voronoi(&set.sites)
    }
}

pub fn diagram_scene(set: &PointSet, model: Model, seed: u64) -> Result<SceneFile, CliError> {
    let d = build_diagram(set)?;
    Ok(SceneFile::from_scene(
        render_scene(&d, model),
        &set.labels,
        Metadata::new(seed),
    ))
}

fn triangulate(set: &PointSet) -> Result<DelaunayComplex, Error> {
    if set.sites.len() < 3 {
        return Err(Error::Degenerate("a triangulation needs at least 3 points"));
    }
    delaunay_complex(&build_diagram(set)?)
}

pub fn delaunay_scene(set: &PointSet, model: Model, seed: u64) -> Result<SceneFile, CliError> {
    let tri = triangulate(set)?;
    Ok(SceneFile::from_delaunay(
        &tri,
        set,
        model,
        Metadata::new(seed),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Center {
    pub klein: Vec2,
    pub poincare: Vec2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SebReport {
    pub center: Center,
    pub radius: f64,
    pub model: Model,
    /// Boundary of the ball sampled at equal Poincaré angles around its
    /// center, in `model` coordinates.
    pub overlay: Vec<Vec2>,
}

/// Boundary samples of the hyperbolic ball around `center`: a Euclidean
/// circle of radius `tanh(r/2)` about the Poincaré origin, carried to the
/// center by a disk isometry.
pub fn ball_overlay(center: KleinPoint, radius: f64, model: Model) -> Result<Vec<Vec2>, Error> {
    let back = MobiusTransform::translate_to_origin(klein_to_poincare(center)).inverse();
    let rho = (radius / 2.0).tanh();
    (0..OVERLAY_SAMPLES)
        .map(|k| {
            let v = Vec2::from_angle(TAU * k as f64 / OVERLAY_SAMPLES as f64) * rho;
            let z = back.apply(PoincarePoint::new(v.x, v.y)?);
            Ok(poincare_to_model(z, model))
        })
        .collect()
}

pub fn seb_report(sites: &[KleinPoint], model: Model, seed: u64) -> Result<SebReport, CliError> {
    let ball = smallest_enclosing_ball(sites, seed)?;
    Ok(SebReport {
        center: Center {
            klein: ball.center.to_vec2(),
            poincare: klein_to_poincare(ball.center).to_vec2(),
        },
        radius: ball.radius,
        model,
        overlay: ball_overlay(ball.center, ball.radius, model)?,
    })
}

fn seb_svg(report: &SebReport, set: &PointSet) -> String {
    let model = report.model;
    let mut canvas = Canvas::new(model);
    canvas.polygon(&report.overlay, "ball");
    for (p, label) in set.sites.iter().zip(&set.labels) {
        canvas.point(
            hvd_core::map_point(p.to_vec2(), model),
            "site",
            label.as_deref(),
        );
    }
    canvas.point(
        hvd_core::map_point(report.center.klein, model),
        "center",
        None,
    );
    canvas.finish()
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output values are finite");
    s.push('\n');
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Diagram,
    Delaunay,
    Seb,
}

/// Runs a file command and returns the output document.
pub fn run(
    command: Command,
    set: &PointSet,
    model: Model,
    format: Format,
    seed: u64,
) -> Result<String, CliError> {
    match command {
        Command::Diagram | Command::Delaunay => {
            let scene = if command == Command::Diagram {
                diagram_scene(set, model, seed)?
            } else {
                delaunay_scene(set, model, seed)?
            };
            Ok(match format {
                Format::Json => scene.to_json(),
                Format::Svg => svg::render_scene_svg(&scene),
            })
        }
        Command::Seb => {
            let report = seb_report(&set.sites, model, seed)?;
            Ok(match format {
                Format::Json => to_json(&report),
                Format::Svg => seb_svg(&report, set),
            })
        }
    }
}
