use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::geodesic::Geodesic;
use super::point::{minkowski, HPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Preserving,
    Reversing,
}

/// A linear isometry of the hyperboloid: `M^T J M = J` with `M[0][0] > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry {
    matrix: Matrix3<f64>,
    orientation: Orientation,
}

const J: Matrix3<f64> = Matrix3::new(-1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);

fn frame_matrix(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::from_columns(&[*a, *b, *c])
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry {
            matrix: Matrix3::identity(),
            orientation: Orientation::Preserving,
        }
    }

    fn from_matrix(matrix: Matrix3<f64>) -> Self {
        let orientation = if matrix.determinant() > 0.0 {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        };
        Isometry {
            matrix,
            orientation,
        }
    }

    /// Conjugates `local`, written in the frame `(base, tangent, normal)` of `g`,
    /// back to ambient coordinates.
    fn in_frame(g: &Geodesic, local: Matrix3<f64>) -> Self {
        let e = frame_matrix(g.base().vector(), g.tangent(), g.normal());
        // A Minkowski-orthonormal frame satisfies E^T J E = J, so E^-1 = J E^T J.
        let e_inv = J * e.transpose() * J;
        Self::from_matrix(e * local * e_inv)
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn apply(&self, p: &HPoint) -> HPoint {
        HPoint::snap(self.matrix * p.vector())
    }

    pub fn apply_vector(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.matrix * v
    }

    pub fn apply_geodesic(&self, g: &Geodesic) -> Geodesic {
        Geodesic::new(self.apply(g.base()), self.apply_vector(g.tangent()))
            .expect("isometries map unit tangents to unit tangents")
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Self::from_matrix(self.matrix * other.matrix)
    }

    pub fn inverse(&self) -> Isometry {
        Isometry {
            matrix: J * self.matrix.transpose() * J,
            orientation: self.orientation,
        }
    }

    /// Largest entry of `M^T J M - J`.
    pub fn lorentz_defect(&self) -> f64 {
        (self.matrix.transpose() * J * self.matrix - J).amax()
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.lorentz_defect() <= tol && self.matrix[(0, 0)] > 0.0
    }
}

/// Reflection in the geodesic `g`: `p -> p - 2 <p,n> n`.
pub fn reflect(g: &Geodesic) -> Isometry {
    let n = g.normal();
    Isometry::from_matrix(Matrix3::identity() - 2.0 * n * (J * n).transpose())
}

/// Hyperbolic translation by arclength `t` along `g`.
pub fn translate_along(g: &Geodesic, t: f64) -> Isometry {
    let (c, s) = (t.cosh(), t.sinh());
    let local = Matrix3::new(c, s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0);
    Isometry::in_frame(g, local)
}

/// Rotation by `angle` about `center`, counterclockwise in the frame
/// `(center, tangent, normal)` of any geodesic based there.
pub fn rotate_about(center: &HPoint, angle: f64) -> Isometry {
    let g = Geodesic::new(*center, Vector3::new(0.0, 1.0, 0.0))
        .or_else(|_| Geodesic::new(*center, Vector3::new(0.0, 0.0, 1.0)))
        .expect("some coordinate direction is transverse");
    let (c, s) = (angle.cos(), angle.sin());
    let local = Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c);
    Isometry::in_frame(&g, local)
}

/// Minkowski product of the images of two points, for invariance checks.
pub fn transported_product(m: &Isometry, p: &HPoint, q: &HPoint) -> f64 {
    minkowski(&(m.matrix * p.vector()), &(m.matrix * q.vector()))
}
