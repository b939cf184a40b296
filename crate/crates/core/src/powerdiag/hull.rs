//! Lower convex hull of lifted power sites.
//!
//! Each site `(c, w)` is lifted to `(c.x, c.y, |c|^2 - w)`. The faces of the
//! lower hull project onto the regular triangulation. The hull is built by
//! randomized incremental insertion with a bipartite conflict graph.
//!
//! Orientation signs are exact (adaptive-precision determinants), so every
//! decision is consistent with one actual point set. Exact zeros are resolved
//! by a symbolic perturbation of the heights: site `k` is lowered by an
//! infinitesimal `eps_k`, with `eps_k` dominating `eps_j` whenever `k > j`.
//! Lowering a height is the same as raising the weight, so on exact ties the
//! higher-index site wins.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use robust::{orient2d, orient3d, Coord, Coord3D};

pub(crate) type Point3 = [f64; 3];

/// Fixed so that construction is deterministic.
const INSERTION_SEED: u64 = 0x5eed_d1a6;

#[inline]
fn xy(p: Point3) -> Coord<f64> {
    Coord { x: p[0], y: p[1] }
}

#[inline]
fn xyz(p: Point3) -> Coord3D<f64> {
    Coord3D {
        x: p[0],
        y: p[1],
        z: p[2],
    }
}

#[inline]
fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Exact sign of the xy orientation of `(a, b, c)`: positive when
/// counter-clockwise.
pub(crate) fn orient2d_xy(a: Point3, b: Point3, c: Point3) -> i8 {
    sign(orient2d(xy(a), xy(b), xy(c)))
}

/// Sign of `det[b - a, c - a, d - a]` under the symbolic height perturbation.
/// Returns 0 only when all four points are collinear in the xy plane.
pub(crate) fn orient3d_sos(pts: &[Point3], ids: [usize; 4]) -> i8 {
    let p = ids.map(|i| pts[i]);
    // the adaptive predicate has the opposite sign convention
    let det = -orient3d(xyz(p[0]), xyz(p[1]), xyz(p[2]), xyz(p[3]));
    if det != 0.0 {
        return sign(det);
    }
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| ids[j].cmp(&ids[i]));
    for slot in order {
        // Derivative of the determinant with respect to this point's height.
        let q = |k: usize| [p[k][0], p[k][1], if k == slot { 1.0 } else { 0.0 }];
        let cof = -orient3d(xyz(q(0)), xyz(q(1)), xyz(q(2)), xyz(q(3)));
        if cof != 0.0 {
            // heights are lowered, so the determinant moves against the cofactor
            return -sign(cof);
        }
    }
    0
}

/// Sign of the 2D orientation of `(t, z)` points under the same perturbation
/// of the heights.
pub(crate) fn orient_chain_sos(pts: &[(f64, f64)], ids: [usize; 3], ranks: [usize; 3]) -> i8 {
    let p = ids.map(|i| Coord {
        x: pts[i].0,
        y: pts[i].1,
    });
    let det = orient2d(p[0], p[1], p[2]);
    if det != 0.0 {
        return sign(det);
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| ranks[j].cmp(&ranks[i]));
    for slot in order {
        let q = |k: usize| Coord {
            x: p[k].x,
            y: if k == slot { 1.0 } else { 0.0 },
        };
        let cof = orient2d(q(0), q(1), q(2));
        if cof != 0.0 {
            return -sign(cof);
        }
    }
    0
}

#[derive(Debug, Clone)]
struct Face {
    /// Counter-clockwise seen from outside the hull.
    v: [usize; 3],
    /// `nbr[k]` shares the edge `(v[k], v[k + 1])`.
    nbr: [usize; 3],
    alive: bool,
    conflicts: Vec<usize>,
}

/// Lower hull faces projected to the plane, as counter-clockwise triangles
/// with adjacency across each edge `(t[k], t[k + 1])`.
#[derive(Debug, Clone, Default)]
pub(crate) struct LowerHull {
    pub triangles: Vec<[usize; 3]>,
    pub adjacency: Vec<[Option<usize>; 3]>,
}

struct HullBuilder<'a> {
    pts: &'a [Point3],
    faces: Vec<Face>,
    point_faces: Vec<Vec<usize>>,
    inserted: Vec<bool>,
    visible_mark: Vec<usize>,
    candidate_mark: Vec<usize>,
}

impl<'a> HullBuilder<'a> {
    fn visible(&self, f: usize, p: usize) -> bool {
        let v = self.faces[f].v;
        orient3d_sos(self.pts, [v[0], v[1], v[2], p]) > 0
    }

    fn push_face(&mut self, v: [usize; 3]) -> usize {
        self.faces.push(Face {
            v,
            nbr: [usize::MAX; 3],
            alive: true,
            conflicts: Vec::new(),
        });
        self.visible_mark.push(0);
        self.faces.len() - 1
    }

    fn init_tetrahedron(&mut self, tet: [usize; 4]) {
        let mut ids = Vec::with_capacity(4);
        for skip in 0..4 {
            let mut v = [0usize; 3];
            let mut k = 0;
            for (i, &t) in tet.iter().enumerate() {
                if i != skip {
                    v[k] = t;
                    k += 1;
                }
            }
            if orient3d_sos(self.pts, [v[0], v[1], v[2], tet[skip]]) > 0 {
                v.swap(1, 2);
            }
            ids.push(self.push_face(v));
        }
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for &f in &ids {
            let v = self.faces[f].v;
            for k in 0..3 {
                edges.insert((v[k], v[(k + 1) % 3]), f);
            }
        }
        for &f in &ids {
            let v = self.faces[f].v;
            for k in 0..3 {
                self.faces[f].nbr[k] = edges[&(v[(k + 1) % 3], v[k])];
            }
        }
        for p in 0..self.pts.len() {
            if self.inserted[p] {
                continue;
            }
            for &f in &ids {
                if self.visible(f, p) {
                    self.faces[f].conflicts.push(p);
                    self.point_faces[p].push(f);
                }
            }
        }
    }

    fn insert(&mut self, p: usize) {
        self.inserted[p] = true;
        let stamp = p + 1;
        let visible: Vec<usize> = self.point_faces[p]
            .iter()
            .copied()
            .filter(|&f| self.faces[f].alive)
            .collect();
        if visible.is_empty() {
            return;
        }
        for &f in &visible {
            self.visible_mark[f] = stamp;
        }

        // (start, end, deleted, kept)
        let mut horizon = Vec::new();
        for &f in &visible {
            let face = &self.faces[f];
            for k in 0..3 {
                let g = face.nbr[k];
                if self.visible_mark[g] != stamp {
                    horizon.push((face.v[k], face.v[(k + 1) % 3], f, g));
                }
            }
        }

        let mut by_start: HashMap<usize, usize> = HashMap::with_capacity(horizon.len());
        let mut created = Vec::with_capacity(horizon.len());
        for &(u, w, deleted, kept) in &horizon {
            let nf = self.push_face([u, w, p]);
            self.faces[nf].nbr[0] = kept;
            let kept_face = &mut self.faces[kept];
            for k in 0..3 {
                if kept_face.v[k] == w && kept_face.v[(k + 1) % 3] == u {
                    kept_face.nbr[k] = nf;
                }
            }
            by_start.insert(u, nf);
            created.push((nf, deleted, kept));
        }
        for &(nf, _, _) in &created {
            let w = self.faces[nf].v[1];
            let next = by_start[&w];
            self.faces[nf].nbr[1] = next;
            self.faces[next].nbr[2] = nf;
        }

        for &(nf, deleted, kept) in &created {
            let candidates = std::mem::take(&mut self.faces[deleted].conflicts);
            let kept_conflicts = std::mem::take(&mut self.faces[kept].conflicts);
            let mut found = Vec::new();
            for &q in candidates.iter().chain(kept_conflicts.iter()) {
                if self.inserted[q] || self.candidate_mark[q] == nf + 1 {
                    continue;
                }
                self.candidate_mark[q] = nf + 1;
                if self.visible(nf, q) {
                    found.push(q);
                }
            }
            for &q in &found {
                self.point_faces[q].push(nf);
            }
            self.faces[nf].conflicts = found;
            // Other horizon edges may read the same lists again.
            self.faces[deleted].conflicts = candidates;
            self.faces[kept].conflicts = kept_conflicts;
        }

        for &f in &visible {
            self.faces[f].alive = false;
            self.faces[f].conflicts = Vec::new();
        }
    }
}

/// Lower hull of `pts` (at least four points, not all collinear in xy).
/// Point indices double as perturbation ranks.
pub(crate) fn lower_hull(pts: &[Point3], tetrahedron: [usize; 4]) -> LowerHull {
    let n = pts.len();
    let mut builder = HullBuilder {
        pts,
        faces: Vec::new(),
        point_faces: vec![Vec::new(); n],
        inserted: vec![false; n],
        visible_mark: Vec::new(),
        candidate_mark: vec![0; n],
    };
    for &t in &tetrahedron {
        builder.inserted[t] = true;
    }
    builder.init_tetrahedron(tetrahedron);

    let mut order: Vec<usize> = (0..n).filter(|i| !tetrahedron.contains(i)).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(INSERTION_SEED));
    for p in order {
        builder.insert(p);
    }

    let faces = builder.faces;
    let mut lower_id = vec![usize::MAX; faces.len()];
    let mut triangles = Vec::new();
    for (f, face) in faces.iter().enumerate() {
        if !face.alive {
            continue;
        }
        let [a, b, c] = face.v.map(|i| pts[i]);
        // Outward normal pointing down <=> clockwise in the xy projection.
        if orient2d_xy(a, b, c) < 0 {
            lower_id[f] = triangles.len();
            triangles.push([face.v[0], face.v[2], face.v[1]]);
        }
    }
    let mut adjacency = Vec::with_capacity(triangles.len());
    for face in faces.iter() {
        if face.alive && {
            let [a, b, c] = face.v.map(|i| pts[i]);
            orient2d_xy(a, b, c) < 0
        } {
            let look = |f: usize| (lower_id[f] != usize::MAX).then_some(lower_id[f]);
            adjacency.push([look(face.nbr[2]), look(face.nbr[1]), look(face.nbr[0])]);
        }
    }
    LowerHull {
        triangles,
        adjacency,
    }
}
