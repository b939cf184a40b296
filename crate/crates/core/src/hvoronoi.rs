//! Hyperbolic Voronoi diagrams in the Klein disk.
//!
//! Klein bisectors are straight lines, and each one is the radical line of the
//! two sites mapped by [`site_to_power`]. The hyperbolic diagram is therefore
//! the power diagram of the mapped sites clipped to the unit disk: every power
//! edge is cut down to a chord and the gaps along the rim are closed with
//! arcs of the unit circle.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bisector::power_bisector_raw;
use crate::hypgeom::{disk_to_halfplane_raw, klein_to_poincare_raw};
use crate::{
    build_power_diagram, site_to_power, Error, KleinPoint, PoincarePoint, PowerDiagram, PowerSite,
    Result, Triangulation, Vec2,
};

/// Chord pieces shorter than this are tangencies and are dropped.
const MIN_CHORD_LENGTH: f64 = 1e-12;

/// Circle fits whose three points are this close to collinear become lines.
const COLLINEAR_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VoronoiEdge {
    /// Piece of a Klein bisector. The cell of `sites.0` lies to the left of
    /// `start -> end`.
    Chord {
        sites: (usize, usize),
        start: Vec2,
        end: Vec2,
    },
    /// Counter-clockwise arc of the unit circle bounding the cell of `site`.
    BoundaryArc {
        site: usize,
        start_angle: f64,
        sweep: f64,
    },
}

impl VoronoiEdge {
    /// Start and end points in Klein coordinates.
    pub fn endpoints(&self) -> (Vec2, Vec2) {
        match *self {
            VoronoiEdge::Chord { start, end, .. } => (start, end),
            VoronoiEdge::BoundaryArc {
                start_angle, sweep, ..
            } => (
                Vec2::from_angle(start_angle),
                Vec2::from_angle(start_angle + sweep),
            ),
        }
    }

    /// Site indices bounded by this edge (one for an arc).
    pub fn site_list(&self) -> Vec<usize> {
        match *self {
            VoronoiEdge::Chord { sites, .. } => vec![sites.0, sites.1],
            VoronoiEdge::BoundaryArc { site, .. } => vec![site],
        }
    }
}

/// One entry of a cell loop: an edge index, traversed backwards when
/// `reversed` is set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellEdge {
    pub edge: usize,
    pub reversed: bool,
}

#[derive(Clone, Debug)]
pub struct HyperbolicVoronoiDiagram {
    sites: Vec<KleinPoint>,
    power: PowerDiagram,
    edges: Vec<VoronoiEdge>,
    cells: Vec<Vec<CellEdge>>,
    vertices: Vec<Vec2>,
}

impl HyperbolicVoronoiDiagram {
    pub fn sites(&self) -> &[KleinPoint] {
        &self.sites
    }

    /// The underlying power diagram of the mapped sites.
    pub fn power(&self) -> &PowerDiagram {
        &self.power
    }

    pub fn edges(&self) -> &[VoronoiEdge] {
        &self.edges
    }

    /// Counter-clockwise boundary loop of every cell. Empty for duplicate
    /// sites and for weighted cells that miss the disk.
    pub fn cells(&self) -> &[Vec<CellEdge>] {
        &self.cells
    }

    /// Diagram vertices strictly inside the disk.
    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn oriented_endpoints(&self, entry: CellEdge) -> (Vec2, Vec2) {
        let (a, b) = self.edges[entry.edge].endpoints();
        if entry.reversed {
            (b, a)
        } else {
            (a, b)
        }
    }

    /// Smallest signed distance from `x` to the chords of a cell, positive
    /// inside. `None` when the cell is empty.
    fn slack(&self, site: usize, x: Vec2) -> Option<f64> {
        let cell = &self.cells[site];
        if cell.is_empty() {
            return None;
        }
        let mut slack = 1.0 - x.norm();
        for entry in cell {
            if let VoronoiEdge::Chord { start, end, .. } = self.edges[entry.edge] {
                let (a, b) = if entry.reversed {
                    (end, start)
                } else {
                    (start, end)
                };
                let dir = (b - a).normalized();
                slack = slack.min(dir.cross(x - a));
            }
        }
        Some(slack)
    }

    /// Whether `x` lies in the clipped cell of `site`, within `tolerance`.
    pub fn cell_contains(&self, site: usize, x: Vec2, tolerance: f64) -> bool {
        self.slack(site, x).is_some_and(|s| s >= -tolerance)
    }

    /// The cell containing `x`, found from the clipped cell boundaries: the
    /// cell in which `x` lies deepest wins, lowest index on ties.
    pub fn locate(&self, x: Vec2) -> usize {
        let mut best = 0;
        let mut best_slack = f64::NEG_INFINITY;
        for site in 0..self.sites.len() {
            if let Some(s) = self.slack(site, x) {
                if s > best_slack {
                    best = site;
                    best_slack = s;
                }
            }
        }
        best
    }

    /// Site pairs whose cells share a chord.
    pub fn adjacent_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.edges
            .iter()
            .filter_map(|e| match *e {
                VoronoiEdge::Chord { sites, .. } => Some(sites),
                VoronoiEdge::BoundaryArc { .. } => None,
            })
            .collect()
    }
}

/// Builds the hyperbolic Voronoi diagram of Klein sites.
pub fn build_hyperbolic_voronoi(points: &[KleinPoint]) -> Result<HyperbolicVoronoiDiagram> {
    let sites: Vec<PowerSite> = points
        .iter()
        .enumerate()
        .map(|(i, &p)| site_to_power(p, i))
        .collect();
    clip(points, sites)
}

/// Like [`build_hyperbolic_voronoi`], with `added_weights[i]` added to the
/// power weight of site `i`.
pub fn build_weighted_voronoi(
    points: &[KleinPoint],
    added_weights: &[f64],
) -> Result<HyperbolicVoronoiDiagram> {
    if points.len() != added_weights.len() {
        return Err(Error::LengthMismatch {
            expected: points.len(),
            actual: added_weights.len(),
        });
    }
    let sites: Vec<PowerSite> = points
        .iter()
        .zip(added_weights)
        .enumerate()
        .map(|(i, (&p, &w))| {
            let mut s = site_to_power(p, i);
            s.weight += w;
            s
        })
        .collect();
    if sites.iter().any(|s| !s.weight.is_finite()) {
        return Err(Error::NonFinite);
    }
    clip(points, sites)
}

/// The part of a regular triangulation that is dual to the hyperbolic
/// diagram, drawn with straight Klein chords.
#[derive(Clone, Debug, PartialEq)]
pub struct DelaunayComplex {
    /// Triangles whose shared power vertex lies inside the disk.
    pub triangles: Vec<[usize; 3]>,
    /// Pairs of sites whose cells share a chord, plus the sides of the
    /// triangles above.
    pub edges: BTreeSet<(usize, usize)>,
    /// The whole regular triangulation, including the part dual to features
    /// outside the disk.
    pub regular: Triangulation,
}

impl DelaunayComplex {
    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }
}

/// The hyperbolic Delaunay complex of Klein sites.
pub fn hyperbolic_delaunay(points: &[KleinPoint]) -> Result<DelaunayComplex> {
    if points.len() < 3 {
        return Err(Error::Degenerate(
            "a triangulation needs at least three sites",
        ));
    }
    delaunay_complex(&build_hyperbolic_voronoi(points)?)
}

/// The Delaunay complex dual to an already built (possibly weighted)
/// diagram.
pub fn delaunay_complex(d: &HyperbolicVoronoiDiagram) -> Result<DelaunayComplex> {
    let regular = d
        .power()
        .triangulation()
        .cloned()
        .ok_or(Error::Degenerate("sites are collinear"))?;
    let sites = d.power().sites();
    let triangles: Vec<[usize; 3]> = regular
        .triangles
        .iter()
        .copied()
        .filter(|t| {
            let [i, j, k] = t.map(|v| &sites[v]);
            let (Ok((a1, b1)), Ok((a2, b2))) = (power_bisector_raw(i, j), power_bisector_raw(i, k))
            else {
                return false;
            };
            // the point of equal power to all three, scaled by det
            let det = a1.cross(a2);
            let num = Vec2::new(-b1 * a2.y + b2 * a1.y, -a1.x * b2 + a2.x * b1);
            num.norm_sq() < det * det
        })
        .collect();
    let mut edges = d.adjacent_pairs();
    for t in &triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            edges.insert((a.min(b), a.max(b)));
        }
    }
    Ok(DelaunayComplex {
        triangles,
        edges,
        regular,
    })
}

fn clip(points: &[KleinPoint], sites: Vec<PowerSite>) -> Result<HyperbolicVoronoiDiagram> {
    let power = build_power_diagram(&sites)?;
    let mut edges = Vec::new();
    // chord (if any) of every power edge
    let mut pieces: Vec<Option<usize>> = Vec::with_capacity(power.edges().len());
    for e in power.edges() {
        let (i, j) = e.sites;
        let (a, b) = power_bisector_raw(&sites[i], &sites[j])?;
        let foot = a * (-b / a.norm_sq());
        let half = 1.0 - foot.norm_sq();
        if half <= 0.0 {
            pieces.push(None);
            continue;
        }
        let half = half.sqrt();
        let shift = (e.origin - foot).dot(e.direction);
        let (lo, hi) = (e.t_start + shift, e.t_end + shift);
        let (start_on_rim, end_on_rim) = (lo <= -half, hi >= half);
        let (lo, hi) = (lo.max(-half), hi.min(half));
        if hi - lo <= MIN_CHORD_LENGTH {
            pieces.push(None);
            continue;
        }
        let point = |u: f64, on_rim: bool, vertex: Option<usize>| match vertex {
            // interior ends sit exactly on the shared diagram vertex
            Some(v) if !on_rim => power.vertices()[v],
            _ => {
                let p = foot + e.direction * u;
                if on_rim {
                    p.normalized()
                } else {
                    p
                }
            }
        };
        pieces.push(Some(edges.len()));
        edges.push(VoronoiEdge::Chord {
            sites: e.sites,
            start: point(lo, start_on_rim, e.start_vertex),
            end: point(hi, end_on_rim, e.end_vertex),
        });
    }

    let mut cells = vec![Vec::new(); points.len()];
    for (site, cell) in cells.iter_mut().enumerate() {
        if power.is_empty_cell(site) {
            continue;
        }
        let chain: Vec<CellEdge> = power.cells()[site]
            .iter()
            .filter_map(|&e| {
                Some(CellEdge {
                    edge: pieces[e]?,
                    reversed: power.edges()[e].sites.0 != site,
                })
            })
            .collect();
        if chain.is_empty() {
            if power.cell_contains(site, Vec2::ZERO, 0.0) {
                cell.push(CellEdge {
                    edge: edges.len(),
                    reversed: false,
                });
                edges.push(VoronoiEdge::BoundaryArc {
                    site,
                    start_angle: 0.0,
                    sweep: TAU,
                });
            }
            continue;
        }
        for k in 0..chain.len() {
            let (entry, next) = (chain[k], chain[(k + 1) % chain.len()]);
            cell.push(entry);
            // consecutive chords either share a vertex or both end on the rim;
            // a vertex lying on the rim itself may be flagged either way
            let end = oriented(&edges, entry).1;
            let start = oriented(&edges, next).0;
            if end.distance(start) <= MIN_CHORD_LENGTH {
                continue;
            }
            let start_angle = end.angle().rem_euclid(TAU);
            let sweep = (start.angle() - end.angle()).rem_euclid(TAU);
            cell.push(CellEdge {
                edge: edges.len(),
                reversed: false,
            });
            edges.push(VoronoiEdge::BoundaryArc {
                site,
                start_angle,
                sweep,
            });
        }
    }

    let vertices = power
        .vertices()
        .iter()
        .copied()
        .filter(|v| v.norm_sq() < 1.0)
        .collect();
    Ok(HyperbolicVoronoiDiagram {
        sites: points.to_vec(),
        power,
        edges,
        cells,
        vertices,
    })
}

fn oriented(edges: &[VoronoiEdge], entry: CellEdge) -> (Vec2, Vec2) {
    let (a, b) = edges[entry.edge].endpoints();
    if entry.reversed {
        (b, a)
    } else {
        (a, b)
    }
}

/// A Poincaré geodesic through two points: an arc of the circle
/// `x^2 + y^2 - 2(ax + by) + 1 = 0`, or a diameter when the points are
/// collinear with the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeodesicArc {
    Arc {
        center: Vec2,
        radius: f64,
        /// Angle of the start point as seen from `center`.
        start_angle: f64,
        /// Signed angle to the end point, `|sweep| < pi`.
        sweep: f64,
    },
    Diameter {
        direction: Vec2,
        start: Vec2,
        end: Vec2,
    },
}

impl GeodesicArc {
    /// Point at parameter `s` in `[0, 1]` along the geodesic.
    pub fn point_at(&self, s: f64) -> Vec2 {
        match *self {
            GeodesicArc::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => center + Vec2::from_angle(start_angle + s * sweep) * radius,
            GeodesicArc::Diameter { start, end, .. } => start + (end - start) * s,
        }
    }

    /// Unit tangent at `x`, a point on the geodesic.
    pub fn tangent_at(&self, x: Vec2) -> Vec2 {
        match *self {
            GeodesicArc::Arc { center, .. } => (x - center).perp().normalized(),
            GeodesicArc::Diameter { direction, .. } => direction,
        }
    }
}

/// The Poincaré geodesic from `p` to `q`.
pub fn poincare_geodesic(p: PoincarePoint, q: PoincarePoint) -> Result<GeodesicArc> {
    poincare_geodesic_raw(p.to_vec2(), q.to_vec2())
}

/// Also accepts ideal endpoints on the unit circle.
pub(crate) fn poincare_geodesic_raw(p: Vec2, q: Vec2) -> Result<GeodesicArc> {
    if p.distance(q) < 1e-12 {
        return Err(Error::CoincidentPoints);
    }
    let det = p.cross(q);
    if det.abs() <= COLLINEAR_TOLERANCE * p.norm() * q.norm() {
        return Ok(GeodesicArc::Diameter {
            direction: (q - p).normalized(),
            start: p,
            end: q,
        });
    }
    // 2(a p.x + b p.y) = |p|^2 + 1, and the same for q
    let (rp, rq) = (0.5 * (p.norm_sq() + 1.0), 0.5 * (q.norm_sq() + 1.0));
    let center = Vec2::new(rp * q.y - rq * p.y, p.x * rq - q.x * rp) / det;
    let radius = (center.norm_sq() - 1.0).max(0.0).sqrt();
    let start_angle = (p - center).angle();
    let sweep = wrap_angle((q - center).angle() - start_angle);
    Ok(GeodesicArc::Arc {
        center,
        radius,
        start_angle,
        sweep,
    })
}

/// Wraps an angle into `(-pi, pi]`.
fn wrap_angle(a: f64) -> f64 {
    let a = a.rem_euclid(TAU);
    if a > PI {
        a - TAU
    } else {
        a
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Klein,
    Poincare,
    HalfPlane,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Klein => "klein",
            Model::Poincare => "poincare",
            Model::HalfPlane => "halfplane",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown model `{0}` (expected klein, poincare or halfplane)")]
pub struct UnknownModel(pub String);

impl FromStr for Model {
    type Err = UnknownModel;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "klein" => Ok(Model::Klein),
            "poincare" => Ok(Model::Poincare),
            "halfplane" => Ok(Model::HalfPlane),
            other => Err(UnknownModel(other.to_owned())),
        }
    }
}

/// A drawable in model coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Primitive {
    Segment {
        start: Vec2,
        end: Vec2,
    },
    /// Circular arc from `start_angle`, counter-clockwise for positive
    /// `sweep`.
    Arc {
        center: Vec2,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
    /// `point + t * direction` over `[t_start, t_end]`, a missing bound being
    /// infinite.
    Line {
        point: Vec2,
        direction: Vec2,
        t_start: Option<f64>,
        t_end: Option<f64>,
    },
}

impl Primitive {
    /// Point at parameter `s` in `[0, 1]`; lines are sampled over their
    /// finite span or one unit past a finite bound.
    pub fn point_at(&self, s: f64) -> Vec2 {
        match *self {
            Primitive::Segment { start, end } => start + (end - start) * s,
            Primitive::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => center + Vec2::from_angle(start_angle + s * sweep) * radius,
            Primitive::Line {
                point,
                direction,
                t_start,
                t_end,
            } => {
                let (a, b) = match (t_start, t_end) {
                    (Some(a), Some(b)) => (a, b),
                    (Some(a), None) => (a, a + 1.0),
                    (None, Some(b)) => (b - 1.0, b),
                    (None, None) => (-0.5, 0.5),
                };
                point + direction * (a + (b - a) * s)
            }
        }
    }
}

/// A rendered diagram edge: one or more primitives (a rim arc through the
/// pole of the half-plane map splits in two).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneEdge {
    pub sites: Vec<usize>,
    pub pieces: Vec<Primitive>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneModel {
    pub model: Model,
    pub sites: Vec<Vec2>,
    /// Parallel to the diagram's edge list.
    pub edges: Vec<SceneEdge>,
    /// Edge indices of each cell loop.
    pub cells: Vec<Vec<usize>>,
}

/// Renders the diagram in the requested model.
pub fn render_scene(d: &HyperbolicVoronoiDiagram, model: Model) -> SceneModel {
    let sites = d
        .sites()
        .iter()
        .map(|p| map_point(p.to_vec2(), model))
        .collect();
    let edges = d
        .edges()
        .iter()
        .map(|e| SceneEdge {
            sites: e.site_list(),
            pieces: render_edge(e, model),
        })
        .collect();
    let cells = d
        .cells()
        .iter()
        .map(|c| c.iter().map(|e| e.edge).collect())
        .collect();
    SceneModel {
        model,
        sites,
        edges,
        cells,
    }
}

/// Maps a Klein point into model coordinates. Used for sites, which stay
/// away from the pole of the half-plane map.
pub fn map_point(k: Vec2, model: Model) -> Vec2 {
    match model {
        Model::Klein => k,
        Model::Poincare => klein_to_poincare_raw(k),
        Model::HalfPlane => disk_to_halfplane_raw(klein_to_poincare_raw(k))
            .unwrap_or(Vec2::new(f64::INFINITY, f64::INFINITY)),
    }
}

/// Renders a Klein chord (endpoints may be ideal) in the given model.
pub fn render_chord(start: Vec2, end: Vec2, model: Model) -> Primitive {
    if model == Model::Klein {
        return Primitive::Segment { start, end };
    }
    let (p, q) = (klein_to_poincare_raw(start), klein_to_poincare_raw(end));
    let geodesic = match poincare_geodesic_raw(p, q) {
        Ok(g) => g,
        Err(_) => return Primitive::Segment { start: p, end: q },
    };
    let poincare = match geodesic {
        GeodesicArc::Arc {
            center,
            radius,
            start_angle,
            sweep,
        } => Primitive::Arc {
            center,
            radius,
            start_angle,
            sweep,
        },
        GeodesicArc::Diameter { start, end, .. } => Primitive::Segment { start, end },
    };
    if model == Model::Poincare {
        return poincare;
    }
    halfplane_image(&poincare)
}

fn render_edge(e: &VoronoiEdge, model: Model) -> Vec<Primitive> {
    match *e {
        VoronoiEdge::Chord { start, end, .. } => vec![render_chord(start, end, model)],
        VoronoiEdge::BoundaryArc {
            start_angle, sweep, ..
        } => match model {
            Model::Klein | Model::Poincare => vec![Primitive::Arc {
                center: Vec2::ZERO,
                radius: 1.0,
                start_angle,
                sweep,
            }],
            Model::HalfPlane => rim_image(start_angle, sweep),
        },
    }
}

/// Image of the rim point at angle `t` on the real axis: `-cot(t/2)`,
/// infinite at `t = 0`.
fn rim_to_axis(t: f64) -> Option<f64> {
    let t = t.rem_euclid(TAU);
    let half = 0.5 * t;
    if half.sin().abs() < 1e-15 {
        None
    } else {
        Some(-half.cos() / half.sin())
    }
}

/// Image of a counter-clockwise rim arc: pieces of the real axis, traversed
/// left to right. The pole at angle 0 splits the arc.
fn rim_image(start_angle: f64, sweep: f64) -> Vec<Primitive> {
    let axis = Vec2::new(1.0, 0.0);
    let s = start_angle.rem_euclid(TAU);
    let e = s + sweep;
    if sweep >= TAU - 1e-15 {
        return vec![Primitive::Line {
            point: Vec2::ZERO,
            direction: axis,
            t_start: None,
            t_end: None,
        }];
    }
    let piece = |a: f64, b: f64| -> Primitive {
        match (rim_to_axis(a), rim_to_axis(b)) {
            (Some(x0), Some(x1)) => Primitive::Segment {
                start: Vec2::new(x0, 0.0),
                end: Vec2::new(x1, 0.0),
            },
            (None, Some(x1)) => Primitive::Line {
                point: Vec2::new(x1, 0.0),
                direction: axis,
                t_start: None,
                t_end: Some(0.0),
            },
            (Some(x0), None) => Primitive::Line {
                point: Vec2::new(x0, 0.0),
                direction: axis,
                t_start: Some(0.0),
                t_end: None,
            },
            (None, None) => Primitive::Line {
                point: Vec2::ZERO,
                direction: axis,
                t_start: None,
                t_end: None,
            },
        }
    };
    if e > TAU && e - TAU > 1e-15 {
        vec![piece(s, TAU), piece(TAU, e)]
    } else {
        vec![piece(s, e)]
    }
}

/// Pushes a Poincaré segment or arc through the disk to half-plane map. The
/// image of a circle is rebuilt from three mapped points.
fn halfplane_image(p: &Primitive) -> Primitive {
    let (a, m, b) = (p.point_at(0.0), p.point_at(0.5), p.point_at(1.0));
    let (wa, wm, wb) = (
        disk_to_halfplane_raw(a),
        disk_to_halfplane_raw(m),
        disk_to_halfplane_raw(b),
    );
    let wm = wm.expect("the interior of a geodesic avoids the pole");
    match (wa, wb) {
        (Some(wa), Some(wb)) => circle_through(wa, wm, wb),
        (None, Some(w)) | (Some(w), None) => Primitive::Line {
            point: w,
            direction: (wm - w).normalized(),
            t_start: Some(0.0),
            t_end: None,
        },
        (None, None) => Primitive::Line {
            point: wm,
            direction: Vec2::new(0.0, 1.0),
            t_start: None,
            t_end: None,
        },
    }
}

/// Arc from `a` through `m` to `b`, or the segment `a -> b` when the points
/// are collinear.
fn circle_through(a: Vec2, m: Vec2, b: Vec2) -> Primitive {
    let (u, v) = (m - a, b - a);
    let det = 2.0 * u.cross(v);
    if det.abs() <= COLLINEAR_TOLERANCE * u.norm() * v.norm() * 2.0 {
        return Primitive::Segment { start: a, end: b };
    }
    let (ru, rv) = (u.norm_sq(), v.norm_sq());
    let center = a + Vec2::new(ru * v.y - rv * u.y, u.x * rv - v.x * ru) / det;
    let radius = (a - center).norm();
    let a0 = (a - center).angle();
    let to_m = ((m - center).angle() - a0).rem_euclid(TAU);
    let to_b = ((b - center).angle() - a0).rem_euclid(TAU);
    let sweep = if to_m < to_b { to_b } else { to_b - TAU };
    Primitive::Arc {
        center,
        radius,
        start_angle: a0,
        sweep,
    }
}

#[cfg(test)]
mod tests;
