//! Planar power (Laguerre) diagrams and their dual regular triangulations.
//!
//! The diagram is the minimization diagram of the power distances
//! `|c_i - x|^2 - w_i`. It is obtained from the lower convex hull of the
//! sites lifted to `z = |c|^2 - w`: hull vertices are the non-empty cells,
//! hull faces are the triangles of the regular triangulation, and each
//! triangle's power center is a diagram vertex.
//!
//! Sites with the same center are collapsed before construction: the larger
//! weight wins (lowest index on equal weights) and the others get an empty
//! cell.

mod hull;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bisector::power_bisector_raw;
use crate::{Error, PowerSite, Result, Vec2};

use hull::{lower_hull, orient2d_xy, orient_chain_sos, Point3};

/// Sites whose centers agree to this absolute tolerance are duplicates.
const DUPLICATE_TOLERANCE: f64 = 1e-12;

/// Adjacent triangles whose power centers are closer than this (relative to
/// their magnitude) share a single diagram vertex.
const VERTEX_MERGE_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Segment,
    Ray,
    Line,
}

/// A piece of the radical line between two sites.
///
/// The edge is `origin + t * direction` for `t` in `[t_start, t_end]`, where
/// either bound may be infinite. `direction` is a unit vector oriented so that
/// the cell of `sites.0` lies to its left; `sites.0 < sites.1`. Finite ends
/// also name the diagram vertex they sit on.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagramEdge {
    pub sites: (usize, usize),
    pub kind: EdgeKind,
    pub origin: Vec2,
    pub direction: Vec2,
    pub t_start: f64,
    pub t_end: f64,
    pub start_vertex: Option<usize>,
    pub end_vertex: Option<usize>,
}

impl DiagramEdge {
    pub fn point_at(&self, t: f64) -> Vec2 {
        self.origin + self.direction * t
    }

    /// The site across this edge from `site`.
    pub fn other(&self, site: usize) -> usize {
        if self.sites.0 == site {
            self.sites.1
        } else {
            self.sites.0
        }
    }

    /// Signed distance of `x` from the edge line, positive on the side of
    /// `sites.0`.
    pub fn side(&self, x: Vec2) -> f64 {
        self.direction.cross(x - self.origin)
    }

    fn new(sites: (usize, usize), kind: EdgeKind, origin: Vec2, direction: Vec2) -> Self {
        let (t_start, t_end) = match kind {
            EdgeKind::Line => (f64::NEG_INFINITY, f64::INFINITY),
            _ => (0.0, 0.0),
        };
        Self {
            sites,
            kind,
            origin,
            direction,
            t_start,
            t_end,
            start_vertex: None,
            end_vertex: None,
        }
    }
}

/// Regular triangulation over site indices, counter-clockwise triangles.
/// `adjacency[t][k]` is the triangle across the edge `(t[k], t[k + 1])`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Triangulation {
    pub vertices: Vec<usize>,
    pub triangles: Vec<[usize; 3]>,
    pub adjacency: Vec<[Option<usize>; 3]>,
}

impl Triangulation {
    /// Undirected edges as `(min, max)` index pairs.
    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                out.insert((a.min(b), a.max(b)));
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct PowerDiagram {
    sites: Vec<PowerSite>,
    vertices: Vec<Vec2>,
    edges: Vec<DiagramEdge>,
    cells: Vec<Vec<usize>>,
    empty: Vec<bool>,
    representative: Vec<usize>,
    triangulation: Option<Triangulation>,
}

impl PowerDiagram {
    pub fn sites(&self) -> &[PowerSite] {
        &self.sites
    }

    /// Points where three or more radical lines meet.
    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn edges(&self) -> &[DiagramEdge] {
        &self.edges
    }

    /// Edge indices of each cell, counter-clockwise around the cell.
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn is_empty_cell(&self, site: usize) -> bool {
        self.empty[site]
    }

    pub fn empty_cell_flags(&self) -> &[bool] {
        &self.empty
    }

    /// For collapsed duplicates, the site that kept the cell.
    pub fn representative(&self, site: usize) -> usize {
        self.representative[site]
    }

    /// The dual triangulation, present when at least three non-collinear
    /// sites have non-empty cells.
    pub fn triangulation(&self) -> Option<&Triangulation> {
        self.triangulation.as_ref()
    }

    /// Index of the site minimizing the power distance to `x`, lowest index
    /// on ties.
    pub fn locate_cell(&self, x: Vec2) -> usize {
        let mut best = 0;
        let mut best_power = f64::INFINITY;
        for (i, s) in self.sites.iter().enumerate() {
            let p = s.power(x);
            if p < best_power {
                best = i;
                best_power = p;
            }
        }
        best
    }

    /// Whether `x` lies in the closed cell of `site`, using the stored edge
    /// geometry with an absolute tolerance on the distance to each edge line.
    pub fn cell_contains(&self, site: usize, x: Vec2, tolerance: f64) -> bool {
        if self.empty[site] {
            return false;
        }
        self.cells[site].iter().all(|&e| {
            let edge = &self.edges[e];
            let side = edge.side(x);
            if edge.sites.0 == site {
                side >= -tolerance
            } else {
                side <= tolerance
            }
        })
    }

    /// Pairs of sites whose cells share an edge of positive length.
    pub fn adjacent_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().map(|e| e.sites).collect()
    }
}

/// Index of the minimizer of `|c_i - x|^2 - w_i`, lowest index on ties.
pub fn locate_cell(diagram: &PowerDiagram, x: Vec2) -> usize {
    diagram.locate_cell(x)
}

/// Builds the power diagram of `sites`.
pub fn build_power_diagram(sites: &[PowerSite]) -> Result<PowerDiagram> {
    if sites.is_empty() {
        return Err(Error::EmptyInput);
    }
    if sites
        .iter()
        .any(|s| !s.center.is_finite() || !s.weight.is_finite())
    {
        return Err(Error::NonFinite);
    }
    let n = sites.len();
    let (representative, active) = collapse_duplicates(sites);
    let mut empty: Vec<bool> = (0..n).map(|i| representative[i] != i).collect();

    let mut diagram = PowerDiagram {
        sites: sites.to_vec(),
        vertices: Vec::new(),
        edges: Vec::new(),
        cells: vec![Vec::new(); n],
        empty: Vec::new(),
        representative,
        triangulation: None,
    };

    if active.len() == 1 {
        diagram.empty = empty;
        return Ok(diagram);
    }

    let lifted: Vec<Point3> = active
        .iter()
        .map(|&i| {
            let s = &sites[i];
            [s.center.x, s.center.y, s.lifted_height()]
        })
        .collect();

    let third = (2..active.len()).find(|&k| orient2d_xy(lifted[0], lifted[1], lifted[k]) != 0);
    match third {
        None => build_chain(&mut diagram, &active, &mut empty)?,
        Some(k) => {
            let triangles = if active.len() == 3 {
                let mut t = [0, 1, 2];
                if orient2d_xy(lifted[0], lifted[1], lifted[2]) < 0 {
                    t.swap(1, 2);
                }
                hull::LowerHull {
                    triangles: vec![t],
                    adjacency: vec![[None; 3]],
                }
            } else {
                let fourth = (2..active.len()).find(|&i| i != k).unwrap();
                lower_hull(&lifted, [0, 1, k, fourth])
            };
            build_planar(&mut diagram, &active, triangles, &mut empty)?;
        }
    }

    diagram.empty = empty;
    // Convex cells: counter-clockwise order is the order of outward normals.
    for (site, cell) in diagram.cells.iter_mut().enumerate() {
        let sites = &diagram.sites;
        let edges = &diagram.edges;
        cell.sort_by(|&a, &b| {
            let key = |e: usize| (sites[edges[e].other(site)].center - sites[site].center).angle();
            key(a).total_cmp(&key(b))
        });
    }
    Ok(diagram)
}

/// Regular triangulation of `sites`: the dual of their power diagram.
pub fn regular_triangulation(sites: &[PowerSite]) -> Result<Triangulation> {
    if sites.len() < 3 {
        return Err(Error::Degenerate(
            "a triangulation needs at least three sites",
        ));
    }
    build_power_diagram(sites)?
        .triangulation
        .ok_or(Error::Degenerate("sites are collinear"))
}

/// Returns the representative of every site and the sorted list of
/// representatives.
fn collapse_duplicates(sites: &[PowerSite]) -> (Vec<usize>, Vec<usize>) {
    let n = sites.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (ca, cb) = (sites[a].center, sites[b].center);
        ca.x.total_cmp(&cb.x)
            .then(ca.y.total_cmp(&cb.y))
            .then(a.cmp(&b))
    });
    let mut representative: Vec<usize> = (0..n).collect();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n {
            let (a, b) = (sites[order[end - 1]].center, sites[order[end]].center);
            if (a.x - b.x).abs() <= DUPLICATE_TOLERANCE && (a.y - b.y).abs() <= DUPLICATE_TOLERANCE
            {
                end += 1;
            } else {
                break;
            }
        }
        if end - start > 1 {
            let group = &order[start..end];
            let winner = group
                .iter()
                .copied()
                .max_by(|&a, &b| sites[a].weight.total_cmp(&sites[b].weight).then(b.cmp(&a)))
                .unwrap();
            for &i in group {
                representative[i] = winner;
            }
        }
        start = end;
    }
    let active = (0..n).filter(|&i| representative[i] == i).collect();
    (representative, active)
}

/// All active sites lie on one line: cells are parallel strips.
fn build_chain(diagram: &mut PowerDiagram, active: &[usize], empty: &mut [bool]) -> Result<()> {
    let sites = &diagram.sites;
    let base = sites[active[0]].center;
    let axis = (sites[active[1]].center - base).normalized();
    let mut order: Vec<usize> = (0..active.len()).collect();
    let profile: Vec<(f64, f64)> = active
        .iter()
        .map(|&i| ((sites[i].center - base).dot(axis), sites[i].lifted_height()))
        .collect();
    order.sort_by(|&a, &b| profile[a].0.total_cmp(&profile[b].0));

    let mut chain: Vec<usize> = Vec::new();
    for &r in &order {
        while chain.len() >= 2 {
            let (a, b) = (chain[chain.len() - 2], chain[chain.len() - 1]);
            let turn = orient_chain_sos(&profile, [a, b, r], [active[a], active[b], active[r]]);
            if turn > 0 {
                break;
            }
            chain.pop();
        }
        chain.push(r);
    }

    let on_chain: BTreeSet<usize> = chain.iter().map(|&k| active[k]).collect();
    for &i in active {
        if !on_chain.contains(&i) {
            empty[i] = true;
        }
    }
    for pair in chain.windows(2) {
        let (i, j) = (
            active[pair[0]].min(active[pair[1]]),
            active[pair[0]].max(active[pair[1]]),
        );
        let (a, b) = power_bisector_raw(&sites[i], &sites[j])?;
        let origin = a * (-b / a.norm_sq());
        let direction = (sites[j].center - sites[i].center).perp().normalized();
        let e = diagram.edges.len();
        diagram
            .edges
            .push(DiagramEdge::new((i, j), EdgeKind::Line, origin, direction));
        diagram.cells[i].push(e);
        diagram.cells[j].push(e);
    }
    Ok(())
}

/// Power center of three sites: the point of equal power distance.
fn power_center(sites: &[PowerSite], [i, j, k]: [usize; 3]) -> Vec2 {
    let ci = sites[i].center;
    let (dj, dk) = (sites[j].center - ci, sites[k].center - ci);
    let rj = dj.norm_sq() + sites[i].weight - sites[j].weight;
    let rk = dk.norm_sq() + sites[i].weight - sites[k].weight;
    let det = 2.0 * dj.cross(dk);
    ci + Vec2::new(rj * dk.y - rk * dj.y, dj.x * rk - dk.x * rj) / det
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn build_planar(
    diagram: &mut PowerDiagram,
    active: &[usize],
    hull: hull::LowerHull,
    empty: &mut [bool],
) -> Result<()> {
    let sites = &diagram.sites;
    let triangles: Vec<[usize; 3]> = hull
        .triangles
        .iter()
        .map(|t| t.map(|k| active[k]))
        .collect();
    let adjacency = hull.adjacency;

    let mut used = BTreeSet::new();
    for t in &triangles {
        used.extend(t.iter().copied());
    }
    for &i in active {
        if !used.contains(&i) {
            empty[i] = true;
        }
    }

    let centers: Vec<Vec2> = triangles.iter().map(|&t| power_center(sites, t)).collect();
    let mut merge = UnionFind((0..triangles.len()).collect());
    for (t, adj) in adjacency.iter().enumerate() {
        for &u in adj.iter().flatten() {
            let (a, b) = (centers[t], centers[u]);
            let scale = 1.0 + a.norm().max(b.norm());
            if a.distance(b) <= VERTEX_MERGE_TOLERANCE * scale {
                merge.union(t, u);
            }
        }
    }
    let mut vertex_of = vec![usize::MAX; triangles.len()];
    for t in 0..triangles.len() {
        let root = merge.find(t);
        if vertex_of[root] == usize::MAX {
            vertex_of[root] = diagram.vertices.len();
            diagram.vertices.push(centers[root]);
        }
        vertex_of[t] = vertex_of[root];
    }

    for (t, tri) in triangles.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            let (i, j) = (a.min(b), a.max(b));
            let direction = (sites[j].center - sites[i].center).perp().normalized();
            let edge = match adjacency[t][k] {
                Some(u) if u > t => {
                    if vertex_of[t] == vertex_of[u] {
                        continue;
                    }
                    let (mut vp, mut vq) = (vertex_of[t], vertex_of[u]);
                    if (diagram.vertices[vq] - diagram.vertices[vp]).dot(direction) < 0.0 {
                        std::mem::swap(&mut vp, &mut vq);
                    }
                    let origin = diagram.vertices[vp];
                    let mut e = DiagramEdge::new((i, j), EdgeKind::Segment, origin, direction);
                    e.t_end = (diagram.vertices[vq] - origin).dot(direction);
                    e.start_vertex = Some(vp);
                    e.end_vertex = Some(vq);
                    e
                }
                Some(_) => continue,
                None => {
                    // Hull edge: the ray leaves the triangle's power center on
                    // the outer side of `a -> b`.
                    let d = sites[b].center - sites[a].center;
                    let outward = Vec2::new(d.y, -d.x);
                    let origin = diagram.vertices[vertex_of[t]];
                    let mut e = DiagramEdge::new((i, j), EdgeKind::Ray, origin, direction);
                    if outward.dot(direction) > 0.0 {
                        e.t_end = f64::INFINITY;
                        e.start_vertex = Some(vertex_of[t]);
                    } else {
                        e.t_start = f64::NEG_INFINITY;
                        e.end_vertex = Some(vertex_of[t]);
                    }
                    e
                }
            };
            let id = diagram.edges.len();
            diagram.edges.push(edge);
            diagram.cells[i].push(id);
            diagram.cells[j].push(id);
        }
    }

    let mut vertices: Vec<usize> = used.into_iter().collect();
    vertices.sort_unstable();
    diagram.triangulation = Some(Triangulation {
        vertices,
        triangles,
        adjacency,
    });
    Ok(())
}

#[cfg(test)]
mod tests;
