//! Orientation-preserving automorphisms of the Poincaré disk,
//! `z -> e^{i theta} (z - a) / (1 - conj(a) z)`, used to move the viewpoint.

use num_complex::Complex64;

use crate::hypgeom::{
    from_complex, klein_to_poincare_raw, poincare_to_klein_raw, to_complex, BOUNDARY_MARGIN,
};
use crate::{klein_to_poincare, Error, KleinPoint, PoincarePoint, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusTransform {
    a: Complex64,
    theta: f64,
}

impl Default for MobiusTransform {
    fn default() -> Self {
        Self::identity()
    }
}

impl MobiusTransform {
    pub fn identity() -> Self {
        Self {
            a: Complex64::new(0.0, 0.0),
            theta: 0.0,
        }
    }

    /// The transform sending `a` to the origin, then rotating by `theta`.
    pub fn new(a: PoincarePoint, theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            a: to_complex(a.to_vec2()),
            theta,
        })
    }

    /// The pure translation taking `a` to the origin.
    pub fn translate_to_origin(a: PoincarePoint) -> Self {
        Self {
            a: to_complex(a.to_vec2()),
            theta: 0.0,
        }
    }

    /// The point mapped to the origin.
    pub fn a(&self) -> PoincarePoint {
        PoincarePoint::new_unchecked(from_complex(self.a))
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn apply_complex(&self, z: Complex64) -> Complex64 {
        Complex64::from_polar(1.0, self.theta) * (z - self.a) / (1.0 - self.a.conj() * z)
    }

    pub fn apply(&self, p: PoincarePoint) -> PoincarePoint {
        PoincarePoint::new_unchecked(from_complex(self.apply_complex(to_complex(p.to_vec2()))))
    }

    /// `[[A, B], [C, D]]` with `T(z) = (Az + B)/(Cz + D)`.
    fn matrix(&self) -> [Complex64; 4] {
        let rot = Complex64::from_polar(1.0, self.theta);
        [rot, -rot * self.a, -self.a.conj(), Complex64::new(1.0, 0.0)]
    }

    fn from_matrix([a, b, _, d]: [Complex64; 4]) -> Self {
        Self {
            a: -b / a,
            theta: (a / d).arg(),
        }
    }

    /// `self` after `other`: `z -> self(other(z))`.
    pub fn compose(&self, other: &MobiusTransform) -> MobiusTransform {
        let [a1, b1, c1, d1] = self.matrix();
        let [a2, b2, c2, d2] = other.matrix();
        Self::from_matrix([
            a1 * a2 + b1 * c2,
            a1 * b2 + b1 * d2,
            c1 * a2 + d1 * c2,
            c1 * b2 + d1 * d2,
        ])
    }

    pub fn inverse(&self) -> MobiusTransform {
        let rot = Complex64::from_polar(1.0, self.theta);
        Self {
            a: -rot * self.a,
            theta: -self.theta,
        }
    }
}

/// Moves `focus` to the center of the disk and carries the points along.
pub fn recenter_sites(points: &[KleinPoint], focus: KleinPoint) -> Result<Vec<KleinPoint>> {
    if focus == KleinPoint::ORIGIN {
        // skip the model round trip so the identity is exact
        return Ok(points.to_vec());
    }
    let t = MobiusTransform::translate_to_origin(klein_to_poincare(focus));
    transform_sites(points, &t)
}

/// Applies a disk automorphism to Klein points, checking that the images
/// stay clear of the boundary.
pub fn transform_sites(points: &[KleinPoint], t: &MobiusTransform) -> Result<Vec<KleinPoint>> {
    points
        .iter()
        .map(|p| {
            let z = to_complex(klein_to_poincare_raw(p.to_vec2()));
            let k = poincare_to_klein_raw(from_complex(t.apply_complex(z)));
            if k.norm() >= 1.0 - BOUNDARY_MARGIN {
                return Err(Error::OutsideDisk { x: k.x, y: k.y });
            }
            KleinPoint::new(k.x, k.y)
        })
        .collect()
}
