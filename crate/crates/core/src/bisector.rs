//! Klein bisectors as affine lines, the map from Klein sites to weighted
//! (power) sites, and radical lines between power sites.
//!
//! A Klein site `p` is sent to the Euclidean center `p / (2 sqrt(1 - |p|^2))`
//! with power weight `|p|^2 / (4 (1 - |p|^2)) - 1 / sqrt(1 - |p|^2)`. The
//! weight is the squared radius that enters the power distance
//! `|x - c|^2 - w`, so it is negative for sites close to the origin. With
//! this choice the radical line of two mapped sites coincides with the Klein
//! bisector of the original pair.

use serde::{Deserialize, Serialize};

use crate::hypgeom::KleinPoint;
use crate::{Error, Result, Vec2};

/// Sites closer than this are treated as coincident.
pub const COINCIDENCE_TOLERANCE: f64 = 1e-12;

/// Normal components below this are treated as zero when fixing the sign of
/// a canonical line.
const SIGN_TOLERANCE: f64 = 1e-12;

/// The line `<normal, x> + offset = 0`, stored with a unit normal whose first
/// non-negligible component is positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineLine {
    normal: Vec2,
    offset: f64,
}

impl AffineLine {
    /// Canonicalizes `<a, x> + b = 0`. Fails when `a` vanishes.
    pub fn new(a: Vec2, b: f64) -> Result<Self> {
        let len = a.norm();
        if !len.is_finite() || len <= 0.0 || !b.is_finite() {
            return Err(Error::Degenerate("line normal must be finite and non-zero"));
        }
        let (mut normal, mut offset) = (a / len, b / len);
        let flip = if normal.x.abs() > SIGN_TOLERANCE {
            normal.x < 0.0
        } else {
            normal.y < 0.0
        };
        if flip {
            normal = -normal;
            offset = -offset;
        }
        Ok(Self { normal, offset })
    }

    #[inline]
    pub fn normal(&self) -> Vec2 {
        self.normal
    }

    #[inline]
    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Signed distance of `x` to the line.
    #[inline]
    pub fn eval(&self, x: Vec2) -> f64 {
        self.normal.dot(x) + self.offset
    }

    /// Orthogonal projection of the origin onto the line.
    pub fn foot(&self) -> Vec2 {
        self.normal * (-self.offset)
    }

    pub fn direction(&self) -> Vec2 {
        self.normal.perp()
    }

    /// Intersection point, or `None` when the normals are (nearly) parallel.
    pub fn intersect(&self, other: &AffineLine, det_tolerance: f64) -> Option<Vec2> {
        let det = self.normal.cross(other.normal);
        if det.abs() < det_tolerance {
            return None;
        }
        let x = (-self.offset * other.normal.y + other.offset * self.normal.y) / det;
        let y = (-self.normal.x * other.offset + other.normal.x * self.offset) / det;
        Some(Vec2::new(x, y))
    }

    /// Compares canonical coefficients, allowing for the sign ambiguity of
    /// nearly vertical normals.
    pub fn approx_eq(&self, other: &AffineLine, tolerance: f64) -> bool {
        let same = (self.normal - other.normal).norm() <= tolerance
            && (self.offset - other.offset).abs() <= tolerance;
        let opposite = (self.normal + other.normal).norm() <= tolerance
            && (self.offset + other.offset).abs() <= tolerance;
        same || opposite
    }
}

/// A Euclidean center with a power weight (a squared radius, possibly
/// negative) and the index of the site it came from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSite {
    pub center: Vec2,
    pub weight: f64,
    pub index: usize,
}

impl PowerSite {
    pub fn new(center: Vec2, weight: f64, index: usize) -> Result<Self> {
        if !center.is_finite() || !weight.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            center,
            weight,
            index,
        })
    }

    /// Power distance `|x - c|^2 - w`.
    #[inline]
    pub fn power(&self, x: Vec2) -> f64 {
        (x - self.center).norm_sq() - self.weight
    }

    /// Height of the site lifted to the paraboloid: `|c|^2 - w`.
    #[inline]
    pub fn lifted_height(&self) -> f64 {
        self.center.norm_sq() - self.weight
    }
}

fn raw_klein_bisector(p: Vec2, q: Vec2) -> (Vec2, f64) {
    let sp = (1.0 - p.norm_sq()).sqrt();
    let sq = (1.0 - q.norm_sq()).sqrt();
    (q * sp - p * sq, sq - sp)
}

/// Klein bisector of `p` and `q` in canonical form. The canonical sign says
/// nothing about which side is which; use [`klein_bisector_oriented`] when
/// the side matters.
pub fn klein_bisector(p: KleinPoint, q: KleinPoint) -> Result<AffineLine> {
    let (p, q) = (p.to_vec2(), q.to_vec2());
    if (p - q).norm() < COINCIDENCE_TOLERANCE {
        return Err(Error::CoincidentPoints);
    }
    let (a, b) = raw_klein_bisector(p, q);
    AffineLine::new(a, b)
}

/// Uncanonicalized Klein bisector `(a, b)`: `<a, x> + b > 0` exactly where
/// `x` is hyperbolically closer to `q` than to `p`.
pub fn klein_bisector_oriented(p: KleinPoint, q: KleinPoint) -> Result<(Vec2, f64)> {
    let (p, q) = (p.to_vec2(), q.to_vec2());
    if (p - q).norm() < COINCIDENCE_TOLERANCE {
        return Err(Error::CoincidentPoints);
    }
    Ok(raw_klein_bisector(p, q))
}

/// Maps a Klein site to its power site.
pub fn site_to_power(p: KleinPoint, index: usize) -> PowerSite {
    let t = p.norm_sq();
    let one_minus = 1.0 - t;
    let s = one_minus.sqrt();
    PowerSite {
        center: p.to_vec2() / (2.0 * s),
        weight: t / (4.0 * one_minus) - 1.0 / s,
        index,
    }
}

/// Radical line `2<x, c2 - c1> + |c1|^2 - |c2|^2 + w2 - w1 = 0`.
pub fn power_bisector(s1: &PowerSite, s2: &PowerSite) -> Result<AffineLine> {
    let (a, b) = power_bisector_raw(s1, s2)?;
    AffineLine::new(a, b)
}

/// Uncanonicalized radical line; `<a, x> + b` equals
/// `power_1(x) - power_2(x)`.
pub(crate) fn power_bisector_raw(s1: &PowerSite, s2: &PowerSite) -> Result<(Vec2, f64)> {
    let d = s2.center - s1.center;
    if d.norm() < COINCIDENCE_TOLERANCE {
        return Err(Error::CoincidentPoints);
    }
    let b = s1.center.norm_sq() - s2.center.norm_sq() + s2.weight - s1.weight;
    Ok((d * 2.0, b))
}
