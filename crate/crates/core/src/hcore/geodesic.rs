use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::point::{direction, distance, flip_time, minkowski, HPoint};
use crate::error::{GeomError, Result};
use crate::tol;

/// Fermi coordinates relative to a geodesic: `s` is the arclength of the
/// foot of the perpendicular, `t` the signed distance to the geodesic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FermiCoords {
    pub s: f64,
    pub t: f64,
}

impl FermiCoords {
    pub fn new(s: f64, t: f64) -> Self {
        Self { s, t }
    }
}

/// An oriented complete geodesic, stored as a Minkowski-orthonormal frame
/// `(base, tangent, normal)`.
///
/// The normal is the tangent turned by +pi/2; it fixes the positive side for
/// the Fermi `t` coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Geodesic {
    base: HPoint,
    tangent: Vector3<f64>,
    normal: Vector3<f64>,
}

/// Lorentzian cross product `J (a x b)`: Minkowski-orthogonal to `a` and `b`.
fn lorentz_cross(a: &Vector3<f64>, b: &Vector3<f64>) -> Vector3<f64> {
    flip_time(&a.cross(b))
}

fn unit_spacelike(v: Vector3<f64>) -> Option<Vector3<f64>> {
    let n2 = minkowski(&v, &v);
    if !(n2 > 0.0) || !n2.is_finite() {
        return None;
    }
    Some(v / n2.sqrt())
}

impl Geodesic {
    /// Geodesic through `base` heading along `dir` (projected onto the tangent plane).
    pub fn new(base: HPoint, dir: Vector3<f64>) -> Result<Self> {
        let b = base.vector();
        let w = dir + b * minkowski(&dir, b);
        let tangent = unit_spacelike(w).ok_or_else(|| {
            GeomError::InvalidParameter(format!("direction {dir:?} is degenerate at {b:?}"))
        })?;
        Ok(Self::from_frame(base, tangent))
    }

    fn from_frame(base: HPoint, tangent: Vector3<f64>) -> Self {
        let b = base.vector();
        // One Gram-Schmidt pass keeps drift from composed isometries in check.
        let tangent = unit_spacelike(tangent + b * minkowski(&tangent, b)).unwrap_or(tangent);
        let n = lorentz_cross(b, &tangent);
        let n = n + b * minkowski(&n, b) - tangent * minkowski(&n, &tangent);
        let normal = unit_spacelike(n).unwrap_or(n);
        Geodesic {
            base,
            tangent,
            normal,
        }
    }

    pub fn base(&self) -> &HPoint {
        &self.base
    }

    pub fn tangent(&self) -> &Vector3<f64> {
        &self.tangent
    }

    pub fn normal(&self) -> &Vector3<f64> {
        &self.normal
    }

    /// Unit-speed parametrisation `cosh(s) base + sinh(s) tangent`.
    pub fn point_at(&self, s: f64) -> HPoint {
        HPoint::snap(self.base.vector() * s.cosh() + self.tangent * s.sinh())
    }

    /// Unit tangent of the geodesic at arclength `s`.
    pub fn velocity_at(&self, s: f64) -> Vector3<f64> {
        self.base.vector() * s.sinh() + self.tangent * s.cosh()
    }

    pub fn fermi_point(&self, f: FermiCoords) -> HPoint {
        let on_axis = self.base.vector() * f.s.cosh() + self.tangent * f.s.sinh();
        HPoint::snap(on_axis * f.t.cosh() + self.normal * f.t.sinh())
    }

    pub fn fermi_coords(&self, p: &HPoint) -> FermiCoords {
        let v = p.vector();
        let t = minkowski(v, &self.normal).asinh();
        let s = (minkowski(v, &self.tangent) / t.cosh()).asinh();
        FermiCoords { s, t }
    }

    /// Foot of the perpendicular from `p`.
    pub fn foot(&self, p: &HPoint) -> HPoint {
        self.point_at(self.fermi_coords(p).s)
    }

    pub fn distance_to(&self, p: &HPoint) -> f64 {
        self.fermi_coords(p).t.abs()
    }

    pub fn contains(&self, p: &HPoint, tol: f64) -> bool {
        self.distance_to(p) <= tol
    }

    /// The geodesic crossing this one at right angles at arclength `s`,
    /// oriented along this geodesic's normal.
    pub fn perpendicular_at(&self, s: f64) -> Geodesic {
        Geodesic::from_frame(self.point_at(s), self.normal)
    }

    pub fn reversed(&self) -> Geodesic {
        Geodesic::from_frame(self.base, -self.tangent)
    }

    /// Re-bases the geodesic at arclength `s` without changing its orientation.
    pub fn rebased(&self, s: f64) -> Geodesic {
        Geodesic::from_frame(self.point_at(s), self.velocity_at(s))
    }

    /// Ideal endpoints as null vectors `base -/+ tangent` (backward, forward).
    pub fn ideal_endpoints(&self) -> [Vector3<f64>; 2] {
        let b = self.base.vector();
        [b - self.tangent, b + self.tangent]
    }

    /// Largest violation of the frame's orthonormality relations.
    pub fn frame_defect(&self) -> f64 {
        let b = self.base.vector();
        let t = &self.tangent;
        let n = &self.normal;
        [
            (minkowski(t, t) - 1.0).abs(),
            (minkowski(n, n) - 1.0).abs(),
            minkowski(b, t).abs() / b[0],
            minkowski(b, n).abs() / b[0],
            minkowski(t, n).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// The geodesic through `p` and `q`, based at `p` and oriented towards `q`.
pub fn geodesic_through(p: &HPoint, q: &HPoint) -> Result<Geodesic> {
    let d = distance(p, q);
    if d <= tol::CONSTRAINT {
        return Err(GeomError::DegeneratePair {
            distance: d,
            tolerance: tol::CONSTRAINT,
        });
    }
    let tangent = direction(p, q).ok_or(GeomError::DegeneratePair {
        distance: d,
        tolerance: tol::CONSTRAINT,
    })?;
    Ok(Geodesic::from_frame(*p, tangent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hcore::midpoint;

    fn axis() -> Geodesic {
        Geodesic::new(HPoint::origin(), Vector3::new(0.0, 1.0, 0.0)).unwrap()
    }

    #[test]
    fn axis_case_frame() {
        let q = HPoint::new(1f64.cosh(), 1f64.sinh(), 0.0).unwrap();
        let g = geodesic_through(&HPoint::origin(), &q).unwrap();
        assert_eq!(g.base().coords(), [1.0, 0.0, 0.0]);
        let t = g.tangent();
        assert!((t[0]).abs() < 1e-15 && (t[1] - 1.0).abs() < 1e-15 && t[2].abs() < 1e-15);
        let n = g.normal();
        assert!(
            (n[2] - 1.0).abs() < 1e-15,
            "normal is the tangent turned by +pi/2"
        );
    }

    #[test]
    fn point_at_zero_is_base_and_one_is_cosh_sinh() {
        let g = axis();
        assert_eq!(g.point_at(0.0).coords(), [1.0, 0.0, 0.0]);
        let c = g.point_at(1.0).coords();
        assert!((c[0] - 1f64.cosh()).abs() < 1e-15);
        assert!((c[1] - 1f64.sinh()).abs() < 1e-15);
    }

    #[test]
    fn through_contains_both_endpoints_and_midpoint() {
        let p = HPoint::from_spatial(0.4, -0.2);
        let q = HPoint::from_spatial(-1.1, 0.9);
        let g = geodesic_through(&p, &q).unwrap();
        let d = distance(&p, &q);
        assert!(distance(&g.point_at(d), &q) < 1e-10);
        assert!(g.contains(&midpoint(&p, &q).unwrap(), 1e-12));
        assert!(g.contains(&q, 1e-12));
    }

    #[test]
    fn through_rejects_coincident_points() {
        let p = HPoint::from_spatial(0.4, -0.2);
        assert!(matches!(
            geodesic_through(&p, &p),
            Err(GeomError::DegeneratePair { .. })
        ));
    }

    #[test]
    fn fermi_perpendicular_at_base() {
        let g = axis();
        let p = g.fermi_point(FermiCoords::new(0.0, 1.0));
        assert!((distance(&p, g.base()) - 1.0).abs() < 1e-15);
        assert!(g.fermi_coords(&g.point_at(2.5)).t.abs() < 1e-15);
    }

    #[test]
    fn positive_t_is_on_the_normal_side() {
        let g = axis();
        let p = g.fermi_point(FermiCoords::new(0.3, 0.5));
        assert!(p.spatial()[1] > 0.0);
    }

    #[test]
    fn perpendicular_meets_at_right_angle() {
        let g = geodesic_through(
            &HPoint::from_spatial(0.2, 0.1),
            &HPoint::from_spatial(1.0, -0.5),
        )
        .unwrap();
        let perp = g.perpendicular_at(0.7);
        let at = g.point_at(0.7);
        assert!(distance(perp.base(), &at) < 1e-14);
        assert!(minkowski(perp.tangent(), &g.velocity_at(0.7)).abs() < 1e-12);
        for tau in [-2.0, -0.5, 0.4, 3.0] {
            let f = g.fermi_coords(&perp.point_at(tau));
            assert!((f.s - 0.7).abs() < 1e-10, "{f:?}");
        }
    }

    #[test]
    fn frame_stays_orthonormal() {
        let g = geodesic_through(
            &HPoint::from_spatial(3.0, 1.0),
            &HPoint::from_spatial(-2.0, 4.0),
        )
        .unwrap();
        assert!(g.frame_defect() < 1e-12);
        assert!(g.perpendicular_at(1.3).frame_defect() < 1e-12);
    }
}
