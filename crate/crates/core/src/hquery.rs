//! Nearest-neighbor and smallest-enclosing-ball queries in the Klein disk.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bisector::klein_bisector_oriented;
use crate::hypgeom::{klein_distance_raw, BOUNDARY_MARGIN};
use crate::{klein_bisector, Error, HyperbolicBall, HyperbolicVoronoiDiagram, KleinPoint, Result};

/// Distances closer than this count as ties (lowest index wins).
const TIE_TOLERANCE: f64 = 1e-12;

/// Bisector pairs whose unit normals have a smaller cross product are
/// treated as parallel.
const INTERSECTION_DET_TOLERANCE: f64 = 1e-12;

/// Containment slack for the enclosing-ball recursion.
const CONTAINMENT_TOLERANCE: f64 = 1e-9;

/// Index of the site closest to `q`, lowest index on ties.
pub fn nearest_neighbor(d: &HyperbolicVoronoiDiagram, q: KleinPoint) -> usize {
    let q = q.to_vec2();
    let mut best = 0;
    let mut best_dist = f64::INFINITY;
    for (i, s) in d.sites().iter().enumerate() {
        let dist = klein_distance_raw(s.to_vec2(), q);
        if dist < best_dist - TIE_TOLERANCE {
            best = i;
            best_dist = dist;
        }
    }
    best
}

/// Hyperbolic midpoint: where the bisector of `p` and `q` crosses the chord
/// between them.
pub fn circumcenter2(p: KleinPoint, q: KleinPoint) -> Result<KleinPoint> {
    let (a, b) = klein_bisector_oriented(p, q)?;
    let (p, q) = (p.to_vec2(), q.to_vec2());
    // negative at p, positive at q
    let (ep, eq) = (a.dot(p) + b, a.dot(q) + b);
    let t = ep / (ep - eq);
    Ok(KleinPoint::new_unchecked(p + (q - p) * t))
}

/// Point equidistant from `p`, `q` and `r`, if it lies inside the disk.
pub fn circumcenter3(p: KleinPoint, q: KleinPoint, r: KleinPoint) -> Result<Option<KleinPoint>> {
    let pq = klein_bisector(p, q)?;
    let qr = klein_bisector(q, r)?;
    klein_bisector(p, r)?;
    Ok(pq
        .intersect(&qr, INTERSECTION_DET_TOLERANCE)
        .filter(|c| c.norm() < 1.0 - BOUNDARY_MARGIN)
        .map(KleinPoint::new_unchecked))
}

fn ball_radius(center: KleinPoint, basis: &[KleinPoint]) -> HyperbolicBall {
    let radius = basis
        .iter()
        .map(|p| klein_distance_raw(center.to_vec2(), p.to_vec2()))
        .fold(0.0, f64::max);
    HyperbolicBall { center, radius }
}

fn ball2(p: KleinPoint, q: KleinPoint) -> HyperbolicBall {
    match circumcenter2(p, q) {
        Ok(m) => ball_radius(m, &[p, q]),
        Err(_) => HyperbolicBall {
            center: p,
            radius: 0.0,
        },
    }
}

/// Smallest ball with `p` and `q` on its boundary that also contains `r`.
fn ball3(p: KleinPoint, q: KleinPoint, r: KleinPoint) -> HyperbolicBall {
    if let Ok(Some(c)) = circumcenter3(p, q, r) {
        return ball_radius(c, &[p, q, r]);
    }
    // No circumcenter in the disk: one of the pairs already spans the set.
    [ball2(p, q), ball2(p, r), ball2(q, r)]
        .into_iter()
        .filter(|b| {
            [p, q, r]
                .iter()
                .all(|&x| b.contains(x, CONTAINMENT_TOLERANCE))
        })
        .min_by(|a, b| a.radius.total_cmp(&b.radius))
        .unwrap_or_else(|| ball2(p, q))
}

/// Minimum-radius hyperbolic ball containing every point, by Welzl's
/// randomized incremental algorithm on a shuffle seeded with `seed`.
pub fn smallest_enclosing_ball(points: &[KleinPoint], seed: u64) -> Result<HyperbolicBall> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut pts = points.to_vec();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let inside = |b: &HyperbolicBall, x: KleinPoint| b.contains(x, CONTAINMENT_TOLERANCE);

    let mut ball = HyperbolicBall {
        center: pts[0],
        radius: 0.0,
    };
    for i in 1..pts.len() {
        if inside(&ball, pts[i]) {
            continue;
        }
        ball = HyperbolicBall {
            center: pts[i],
            radius: 0.0,
        };
        for j in 0..i {
            if inside(&ball, pts[j]) {
                continue;
            }
            ball = ball2(pts[i], pts[j]);
            for k in 0..j {
                if !inside(&ball, pts[k]) {
                    ball = ball3(pts[i], pts[j], pts[k]);
                }
            }
        }
    }
    Ok(ball)
}
