//! Point types for the Klein disk, Poincaré disk and upper half-plane models,
//! hyperbolic distances, and the conversions between the three models.
//!
//! Disk points are validated at construction: a point is accepted only when
//! its Euclidean norm is below `1 - BOUNDARY_MARGIN`. Raw [`Vec2`] helpers
//! (`*_raw`) skip that check so that ideal points on the unit circle can be
//! pushed through the same maps when rendering.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec2};

/// Points with norm at or beyond `1 - BOUNDARY_MARGIN` are rejected.
pub const BOUNDARY_MARGIN: f64 = 1e-9;

/// Arguments of arccosh in `[1 - ACOSH_SLACK, 1)` are clamped to 1.
pub const ACOSH_SLACK: f64 = 1e-12;

/// Below this squared norm the Klein to Poincaré factor uses its series.
const SERIES_THRESHOLD: f64 = 1e-8;

/// Past this value arccosh is well conditioned; below it distances are
/// evaluated through the equivalent arcsinh form.
const ACOSH_WELL_CONDITIONED: f64 = 2.0;

fn check_disk(x: f64, y: f64) -> Result<()> {
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::NonFinite);
    }
    if x.hypot(y) < 1.0 - BOUNDARY_MARGIN {
        Ok(())
    } else {
        Err(Error::OutsideDisk { x, y })
    }
}

macro_rules! disk_point {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
        #[serde(try_from = "Vec2", into = "Vec2")]
        pub struct $name {
            x: f64,
            y: f64,
        }

        impl $name {
            pub const ORIGIN: $name = $name { x: 0.0, y: 0.0 };

            pub fn new(x: f64, y: f64) -> Result<Self> {
                check_disk(x, y)?;
                Ok(Self { x, y })
            }

            /// Skips the disk check; callers guarantee the invariant.
            pub(crate) fn new_unchecked(v: Vec2) -> Self {
                Self { x: v.x, y: v.y }
            }

            #[inline]
            pub fn x(&self) -> f64 {
                self.x
            }

            #[inline]
            pub fn y(&self) -> f64 {
                self.y
            }

            #[inline]
            pub fn to_vec2(self) -> Vec2 {
                Vec2::new(self.x, self.y)
            }

            #[inline]
            pub fn norm_sq(&self) -> f64 {
                self.x * self.x + self.y * self.y
            }
        }

        impl TryFrom<Vec2> for $name {
            type Error = Error;
            fn try_from(v: Vec2) -> Result<Self> {
                Self::new(v.x, v.y)
            }
        }

        impl From<$name> for Vec2 {
            fn from(p: $name) -> Vec2 {
                p.to_vec2()
            }
        }
    };
}

disk_point!(
    /// A point of the Beltrami-Klein disk. Geodesics are straight chords.
    KleinPoint
);
disk_point!(
    /// A point of the conformal Poincaré disk.
    PoincarePoint
);

/// A point `re + i im` of the upper half-plane, `im > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint {
    re: f64,
    im: f64,
}

impl HalfPlanePoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::NonFinite);
        }
        if im > 0.0 {
            Ok(Self { re, im })
        } else {
            Err(Error::NotInUpperHalfPlane { re, im })
        }
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn to_vec2(self) -> Vec2 {
        Vec2::new(self.re, self.im)
    }
}

/// A hyperbolic ball: Klein center and hyperbolic radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicBall {
    pub center: KleinPoint,
    pub radius: f64,
}

impl HyperbolicBall {
    pub fn new(center: KleinPoint, radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::Degenerate(
                "ball radius must be finite and non-negative",
            ));
        }
        Ok(Self { center, radius })
    }

    pub fn contains(&self, p: KleinPoint, tolerance: f64) -> bool {
        klein_distance(self.center, p) <= self.radius + tolerance
    }
}

/// `arccosh x = log(x + sqrt(x^2 - 1))`, clamping rounding noise just below 1.
pub fn acosh_clamped(x: f64) -> Result<f64> {
    if x >= 1.0 {
        Ok((x + (x * x - 1.0).sqrt()).ln())
    } else if x >= 1.0 - ACOSH_SLACK {
        Ok(0.0)
    } else {
        Err(Error::ArccoshDomain(x))
    }
}

pub(crate) fn klein_distance_raw(p: Vec2, q: Vec2) -> f64 {
    let den = ((1.0 - p.norm_sq()) * (1.0 - q.norm_sq())).sqrt();
    let arg = (1.0 - p.dot(q)) / den;
    if arg > ACOSH_WELL_CONDITIONED {
        return acosh_clamped(arg).unwrap_or(0.0);
    }
    // cosh^2 - 1 = (|p-q|^2 - (p x q)^2) / den^2 by Lagrange's identity.
    let d = q - p;
    let cross = p.cross(d);
    let sinh = ((d.norm_sq() - cross * cross).max(0.0)).sqrt() / den;
    sinh.asinh()
}

/// Hyperbolic distance between two points of the Klein disk.
pub fn klein_distance(p: KleinPoint, q: KleinPoint) -> f64 {
    klein_distance_raw(p.to_vec2(), q.to_vec2())
}

pub(crate) fn poincare_distance_raw(p: Vec2, q: Vec2) -> f64 {
    let den = (1.0 - p.norm_sq()) * (1.0 - q.norm_sq());
    let gap = (p - q).norm_sq();
    let arg = 1.0 + 2.0 * gap / den;
    if arg > ACOSH_WELL_CONDITIONED {
        return acosh_clamped(arg).unwrap_or(0.0);
    }
    // arccosh(1 + delta) = 2 arcsinh(sqrt(delta / 2))
    2.0 * (gap / den).sqrt().asinh()
}

/// Hyperbolic distance between two points of the Poincaré disk.
pub fn poincare_distance(p: PoincarePoint, q: PoincarePoint) -> f64 {
    poincare_distance_raw(p.to_vec2(), q.to_vec2())
}

/// Radial Klein to Poincaré map; valid on the closed disk.
pub(crate) fn klein_to_poincare_raw(k: Vec2) -> Vec2 {
    let t = k.norm_sq();
    let factor = if t < SERIES_THRESHOLD {
        0.5 * (1.0 + 0.25 * t)
    } else {
        // (1 - sqrt(1 - t)) / t, rationalized
        1.0 / (1.0 + (1.0 - t).max(0.0).sqrt())
    };
    k * factor
}

pub(crate) fn poincare_to_klein_raw(p: Vec2) -> Vec2 {
    p * (2.0 / (1.0 + p.norm_sq()))
}

pub fn klein_to_poincare(k: KleinPoint) -> PoincarePoint {
    PoincarePoint::new_unchecked(klein_to_poincare_raw(k.to_vec2()))
}

pub fn poincare_to_klein(p: PoincarePoint) -> KleinPoint {
    KleinPoint::new_unchecked(poincare_to_klein_raw(p.to_vec2()))
}

#[inline]
pub(crate) fn to_complex(v: Vec2) -> Complex64 {
    Complex64::new(v.x, v.y)
}

#[inline]
pub(crate) fn from_complex(z: Complex64) -> Vec2 {
    Vec2::new(z.re, z.im)
}

/// `f(z) = i(z + 1)/(1 - z)`; `None` when `z` is (numerically) the pole `1`.
pub(crate) fn disk_to_halfplane_raw(z: Vec2) -> Option<Vec2> {
    let z = to_complex(z);
    let den = Complex64::new(1.0, 0.0) - z;
    if den.norm() < 1e-12 {
        return None;
    }
    Some(from_complex(Complex64::i() * (z + 1.0) / den))
}

pub(crate) fn halfplane_to_disk_raw(w: Vec2) -> Vec2 {
    let w = to_complex(w);
    from_complex((w - Complex64::i()) / (w + Complex64::i()))
}

/// Maps the Poincaré disk onto the upper half-plane.
pub fn disk_to_halfplane(z: PoincarePoint) -> HalfPlanePoint {
    let w = disk_to_halfplane_raw(z.to_vec2()).expect("disk points stay away from the pole");
    HalfPlanePoint {
        re: w.x,
        im: w.y.max(f64::MIN_POSITIVE),
    }
}

/// Maps the upper half-plane back onto the Poincaré disk.
pub fn halfplane_to_disk(w: HalfPlanePoint) -> Result<PoincarePoint> {
    let z = halfplane_to_disk_raw(w.to_vec2());
    PoincarePoint::new(z.x, z.y)
}
