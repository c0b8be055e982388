use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::dd;
use crate::error::{GeomError, Result};
use crate::tol;

/// Minkowski form of signature (-,+,+).
#[inline]
pub fn minkowski(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `J = diag(-1, 1, 1)` applied to a vector.
#[inline]
pub(crate) fn flip_time(v: &Vector3<f64>) -> Vector3<f64> {
    Vector3::new(-v[0], v[1], v[2])
}

/// `2 asinh(sqrt(u / 2))`, i.e. `arccosh(1 + u)` without the cancellation near `u = 0`.
#[inline]
pub fn acosh1p(u: f64) -> f64 {
    2.0 * (0.5 * u.max(0.0)).sqrt().asinh()
}

/// A point on the upper sheet of the hyperboloid `<p,p> = -1`.
///
/// The spatial coordinates `(x1, x2)` are authoritative; `x0` is always
/// recomputed from them, so every constructed point lies on the sheet up to
/// the rounding of `x0` itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 3]", try_from = "[f64; 3]")]
pub struct HPoint(Vector3<f64>);

impl HPoint {
    pub fn origin() -> Self {
        HPoint(Vector3::new(1.0, 0.0, 0.0))
    }

    /// Point over the spatial coordinates `(x1, x2)`.
    pub fn from_spatial(x1: f64, x2: f64) -> Self {
        let x0 = dd::lift(x1, x2).to_f64();
        HPoint(Vector3::new(x0, x1, x2))
    }

    /// Validates hyperboloid coordinates and snaps them onto the sheet.
    pub fn new(x0: f64, x1: f64, x2: f64) -> Result<Self> {
        if !(x0.is_finite() && x1.is_finite() && x2.is_finite()) {
            return Err(GeomError::InvalidPoint {
                reason: "non-finite coordinate".into(),
            });
        }
        if x0 <= 0.0 {
            return Err(GeomError::InvalidPoint {
                reason: format!("x0 = {x0} is not on the upper sheet"),
            });
        }
        let v = Vector3::new(x0, x1, x2);
        let defect = minkowski(&v, &v) + 1.0;
        // Rounding in the inputs scales with x0^2.
        if defect.abs() > 1e-9 * x0 * x0 {
            return Err(GeomError::InvalidPoint {
                reason: format!("<p,p> + 1 = {defect:e}"),
            });
        }
        Ok(Self::from_spatial(x1, x2))
    }

    /// Projects a future-pointing timelike vector onto the sheet along its ray.
    pub fn from_timelike(v: Vector3<f64>) -> Result<Self> {
        let norm2 = -minkowski(&v, &v);
        if !(norm2 > 0.0) || v[0] <= 0.0 || !norm2.is_finite() {
            return Err(GeomError::InvalidPoint {
                reason: format!("vector {v:?} is not future timelike"),
            });
        }
        let s = norm2.sqrt();
        Ok(Self::from_spatial(v[1] / s, v[2] / s))
    }

    /// Re-derives `x0` from the spatial part of an (almost) on-sheet vector.
    pub(crate) fn snap(v: Vector3<f64>) -> Self {
        Self::from_spatial(v[1], v[2])
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.0[0], self.0[1], self.0[2]]
    }

    pub fn spatial(&self) -> [f64; 2] {
        [self.0[1], self.0[2]]
    }

    pub fn vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn distance(&self, other: &HPoint) -> f64 {
        distance(self, other)
    }

    /// Worst constraint defect `|<p,p> + 1|`, relative to `x0^2`.
    pub fn constraint_defect(&self) -> f64 {
        (minkowski(&self.0, &self.0) + 1.0).abs() / (self.0[0] * self.0[0])
    }
}

impl From<HPoint> for [f64; 3] {
    fn from(p: HPoint) -> Self {
        p.coords()
    }
}

impl TryFrom<[f64; 3]> for HPoint {
    type Error = GeomError;
    fn try_from(c: [f64; 3]) -> Result<Self> {
        HPoint::new(c[0], c[1], c[2])
    }
}

/// `cosh d(p, q) - 1`, computed in double-double from the spatial parts.
pub fn cosh_distance_minus_one(p: &HPoint, q: &HPoint) -> f64 {
    if p.spatial() == q.spatial() {
        return 0.0;
    }
    dd::cosh_minus_one(p.spatial(), q.spatial())
}

/// Hyperbolic distance `arccosh(-<p,q>)`.
pub fn distance(p: &HPoint, q: &HPoint) -> f64 {
    acosh1p(cosh_distance_minus_one(p, q))
}

/// Midpoint of the segment `[p, q]`.
pub fn midpoint(p: &HPoint, q: &HPoint) -> Result<HPoint> {
    let d = distance(p, q);
    if d <= tol::CONSTRAINT {
        return Err(GeomError::DegeneratePair {
            distance: d,
            tolerance: tol::CONSTRAINT,
        });
    }
    HPoint::from_timelike(p.0 + q.0)
}

/// Unit tangent at `from` pointing towards `to`, or `None` if they coincide.
pub fn direction(from: &HPoint, to: &HPoint) -> Option<Vector3<f64>> {
    // to + <to,from> from, with <to,from> + 1 = -(cosh d - 1) taken exactly.
    let c1 = cosh_distance_minus_one(from, to);
    let w = (to.0 - from.0) - from.0 * c1;
    let n2 = minkowski(&w, &w);
    if !(n2 > 0.0) {
        return None;
    }
    Some(w / n2.sqrt())
}

/// Interior angle at `vertex` of the geodesic segments towards `a` and `b`.
pub fn angle_at(vertex: &HPoint, a: &HPoint, b: &HPoint) -> Option<f64> {
    let u = direction(vertex, a)?;
    let w = direction(vertex, b)?;
    Some(minkowski(&u, &w).clamp(-1.0, 1.0).acos())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_to_self_is_zero() {
        let p = HPoint::from_spatial(0.3, -1.2);
        assert_eq!(distance(&p, &p), 0.0);
    }

    #[test]
    fn distance_along_the_x1_axis() {
        let p = HPoint::origin();
        let q = HPoint::new(1f64.cosh(), 1f64.sinh(), 0.0).unwrap();
        assert!((distance(&p, &q) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn distance_along_the_x2_axis() {
        let q = HPoint::new(2f64.cosh(), 0.0, 2f64.sinh()).unwrap();
        assert!((distance(&HPoint::origin(), &q) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn nearby_points_keep_full_precision() {
        let p = HPoint::from_spatial(1e-9, 0.0);
        let d = distance(&HPoint::origin(), &p);
        assert!((d - 1e-9).abs() < 1e-24, "{d:e}");
    }

    #[test]
    fn midpoint_of_a_point_with_itself_is_rejected() {
        let p = HPoint::from_spatial(0.5, 0.5);
        assert!(matches!(
            midpoint(&p, &p),
            Err(GeomError::DegeneratePair { .. })
        ));
    }

    #[test]
    fn midpoint_on_the_axis() {
        let q = HPoint::new(2f64.cosh(), 2f64.sinh(), 0.0).unwrap();
        let m = midpoint(&HPoint::origin(), &q).unwrap();
        let c = m.coords();
        assert!((c[0] - 1f64.cosh()).abs() < 1e-14);
        assert!((c[1] - 1f64.sinh()).abs() < 1e-14);
        assert!(c[2].abs() < 1e-15);
    }

    #[test]
    fn off_sheet_coordinates_are_rejected() {
        assert!(HPoint::new(1.0, 1.0, 0.0).is_err());
        assert!(HPoint::new(-1.0, 0.0, 0.0).is_err());
        assert!(HPoint::new(f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let p = HPoint::from_spatial(0.25, -0.75);
        let s = serde_json::to_string(&p).unwrap();
        let back: HPoint = serde_json::from_str(&s).unwrap();
        assert!(distance(&p, &back) < 1e-15);
    }

    #[test]
    fn right_angle_at_origin() {
        let a = HPoint::from_spatial(1.0, 0.0);
        let b = HPoint::from_spatial(0.0, 2.0);
        let ang = angle_at(&HPoint::origin(), &a, &b).unwrap();
        assert!((ang - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }
}
