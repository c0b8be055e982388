use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::geodesic::{FermiCoords, Geodesic};
use super::point::{acosh1p, angle_at, distance, HPoint};
use crate::error::{GeomError, Result};

/// `2 sinh^2(x / 2) = cosh x - 1`, accurate for small `x`.
#[inline]
pub(crate) fn cosh_m1(x: f64) -> f64 {
    let h = (0.5 * x).sinh();
    2.0 * h * h
}

/// Hypotenuse of a right triangle with legs `a` and `b`: `arccosh(cosh a cosh b)`.
pub fn hyp_pythagoras(a: f64, b: f64) -> f64 {
    // cosh a cosh b - 1 = (cosh a - 1) cosh b + (cosh b - 1)
    acosh1p(cosh_m1(a) * b.cosh() + cosh_m1(b))
}

/// The right triangle realising [`hyp_pythagoras`]: legs along `g` and its
/// perpendicular at the base. Returns `(right-angle vertex, a-end, b-end)`.
pub fn right_triangle(g: &Geodesic, a: f64, b: f64) -> [HPoint; 3] {
    [
        *g.base(),
        g.fermi_point(FermiCoords::new(a, 0.0)),
        g.fermi_point(FermiCoords::new(0.0, b)),
    ]
}

/// A Lambert quadrilateral: three right angles, one acute.
///
/// Vertices are listed around the boundary starting at the acute one:
/// `[acute, w, g, z]` with sides `acute-w` of length `k` and `z-acute` of
/// length `a`. The diagonal from the acute vertex ends at `g`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LambertQuad {
    pub vertices: [HPoint; 4],
    pub a: f64,
    pub k: f64,
    /// Closed-form diagonal `arcsinh(sqrt(sinh^2 a + sinh^2 k))`.
    pub b: f64,
}

impl LambertQuad {
    /// Distance between the acute vertex and the opposite vertex.
    pub fn geometric_diagonal(&self) -> f64 {
        distance(&self.vertices[0], &self.vertices[2])
    }

    /// Side lengths measured on the constructed vertices, in boundary order.
    pub fn side_lengths(&self) -> [f64; 4] {
        let v = &self.vertices;
        [
            distance(&v[0], &v[1]),
            distance(&v[1], &v[2]),
            distance(&v[2], &v[3]),
            distance(&v[3], &v[0]),
        ]
    }

    /// Interior angles in vertex order.
    pub fn interior_angles(&self) -> [f64; 4] {
        let v = &self.vertices;
        std::array::from_fn(|i| {
            angle_at(&v[i], &v[(i + 3) % 4], &v[(i + 1) % 4]).unwrap_or(f64::NAN)
        })
    }

    /// `|sinh^2 a + sinh^2 k - sinh^2 b|` using the geometric diagonal.
    pub fn identity_residual(&self) -> f64 {
        let sq = |x: f64| x.sinh().powi(2);
        (sq(self.a) + sq(self.k) - sq(self.geometric_diagonal())).abs()
    }

    /// `a^2 + k^2 - b^2`, strictly positive for every Lambert quadrilateral.
    pub fn strict_margin(&self) -> f64 {
        self.a * self.a + self.k * self.k - self.b * self.b
    }
}

/// Builds the Lambert quadrilateral whose sides at the acute angle have
/// lengths `a` and `k`.
///
/// The side `w-g` lies on a reference line through the origin; the acute
/// vertex sits at distance `k` above `w`, and `g` is placed so that the
/// perpendicular through it is at distance `a` from the acute vertex
/// (`sinh a = cosh k sinh |wg|`).
pub fn lambert_quad(a: f64, k: f64) -> Result<LambertQuad> {
    if !(a > 0.0 && k > 0.0 && a.is_finite() && k.is_finite()) {
        return Err(GeomError::InvalidParameter(format!(
            "Lambert sides must be positive, got a = {a}, k = {k}"
        )));
    }
    let base = Geodesic::new(HPoint::origin(), Vector3::new(0.0, 1.0, 0.0))?;
    let acute = base.fermi_point(FermiCoords::new(0.0, k));
    let w = *base.base();
    let run = (a.sinh() / k.cosh()).asinh();
    let g = base.point_at(run);
    let mu = base.perpendicular_at(run);
    let z = mu.foot(&acute);
    let b = (a.sinh().powi(2) + k.sinh().powi(2)).sqrt().asinh();
    Ok(LambertQuad {
        vertices: [acute, w, g, z],
        a,
        k,
        b,
    })
}
