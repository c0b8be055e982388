//! Conversions between the hyperboloid and the two planar models.

use clap::ValueEnum;
use hypbisect::hcore::HPoint;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// Poincaré disk, |z| < 1.
    Disk,
    /// Upper half-plane, Im z > 0.
    HalfPlane,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Disk => "disk",
            Model::HalfPlane => "half-plane",
        }
    }

    pub fn to_hyperboloid(self, z: [f64; 2]) -> Result<HPoint, String> {
        match self {
            Model::Disk => disk_to_hyperboloid(z),
            Model::HalfPlane => half_plane_to_hyperboloid(z),
        }
    }

    pub fn project(self, p: &HPoint) -> [f64; 2] {
        match self {
            Model::Disk => hyperboloid_to_disk(p),
            Model::HalfPlane => disk_to_half_plane(hyperboloid_to_disk(p)),
        }
    }

    /// Image of an ideal point given as a future null vector. `None` for the
    /// point at infinity of the half-plane.
    pub fn ideal(self, v: [f64; 3]) -> Option<[f64; 2]> {
        let w = [v[1] / v[0], v[2] / v[0]];
        match self {
            Model::Disk => Some(w),
            Model::HalfPlane => {
                if (1.0 - w[0]).powi(2) + w[1] * w[1] < 1e-20 {
                    None
                } else {
                    Some(disk_to_half_plane(w))
                }
            }
        }
    }
}

pub fn hyperboloid_to_disk(p: &HPoint) -> [f64; 2] {
    let [x0, x1, x2] = p.coords();
    [x1 / (1.0 + x0), x2 / (1.0 + x0)]
}

pub fn disk_to_hyperboloid(w: [f64; 2]) -> Result<HPoint, String> {
    let r2 = w[0] * w[0] + w[1] * w[1];
    if !(r2 < 1.0) {
        return Err(format!("({}, {}) is not inside the unit disk", w[0], w[1]));
    }
    let f = 2.0 / (1.0 - r2);
    Ok(HPoint::from_spatial(f * w[0], f * w[1]))
}

/// Cayley transform `w = (z - i) / (z + i)` and its inverse.
pub fn half_plane_to_disk(z: [f64; 2]) -> [f64; 2] {
    let (x, y) = (z[0], z[1]);
    let den = x * x + (y + 1.0) * (y + 1.0);
    [(x * x + y * y - 1.0) / den, -2.0 * x / den]
}

pub fn disk_to_half_plane(w: [f64; 2]) -> [f64; 2] {
    let (a, b) = (w[0], w[1]);
    let den = (1.0 - a) * (1.0 - a) + b * b;
    [-2.0 * b / den, (1.0 - a * a - b * b) / den]
}

pub fn half_plane_to_hyperboloid(z: [f64; 2]) -> Result<HPoint, String> {
    if !(z[1] > 0.0) || !z[0].is_finite() || !z[1].is_finite() {
        return Err(format!(
            "({}, {}) is not in the upper half-plane",
            z[0], z[1]
        ));
    }
    disk_to_hyperboloid(half_plane_to_disk(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypbisect::hcore::distance;

    fn grid() -> Vec<HPoint> {
        let mut out = Vec::new();
        for i in -6..=6 {
            for j in -6..=6 {
                out.push(HPoint::from_spatial(0.5 * i as f64, 0.5 * j as f64));
            }
        }
        out
    }

    #[test]
    fn round_trips_through_both_models() {
        for p in grid() {
            for m in [Model::Disk, Model::HalfPlane] {
                let q = m.to_hyperboloid(m.project(&p)).unwrap();
                assert!(distance(&p, &q) < 1e-10, "{m:?} {p:?}");
            }
            let w = hyperboloid_to_disk(&p);
            let back = half_plane_to_disk(disk_to_half_plane(w));
            assert!((back[0] - w[0]).abs() < 1e-12 && (back[1] - w[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn origin_maps_to_centre_and_i() {
        let o = HPoint::origin();
        assert_eq!(hyperboloid_to_disk(&o), [0.0, 0.0]);
        let z = Model::HalfPlane.project(&o);
        assert!(z[0].abs() < 1e-15 && (z[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn distances_agree_with_the_disk_formula() {
        let (a, b) = ([0.3, -0.2], [-0.5, 0.1]);
        let d = distance(
            &disk_to_hyperboloid(a).unwrap(),
            &disk_to_hyperboloid(b).unwrap(),
        );
        let sq = |v: [f64; 2]| v[0] * v[0] + v[1] * v[1];
        let diff = [a[0] - b[0], a[1] - b[1]];
        let expected = (1.0 + 2.0 * sq(diff) / ((1.0 - sq(a)) * (1.0 - sq(b)))).acosh();
        assert!((d - expected).abs() < 1e-14);
    }

    #[test]
    fn rejects_points_outside_the_model() {
        assert!(disk_to_hyperboloid([1.0, 0.0]).is_err());
        assert!(half_plane_to_hyperboloid([0.0, -1.0]).is_err());
        assert!(half_plane_to_hyperboloid([0.0, 0.0]).is_err());
    }

    #[test]
    fn ideal_points() {
        assert_eq!(Model::HalfPlane.ideal([1.0, 1.0, 0.0]), None);
        let e = Model::HalfPlane.ideal([1.0, -1.0, 0.0]).unwrap();
        assert!(e[0].abs() < 1e-15 && e[1].abs() < 1e-15);
        assert_eq!(Model::Disk.ideal([2.0, 0.0, 2.0]), Some([0.0, 1.0]));
    }
}
