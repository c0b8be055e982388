//! Hyperbolic-plane kernel on the hyperboloid model.
//!
//! Points live on the upper sheet of `<p,p> = -1` in Minkowski 3-space with
//! the form `-x0 y0 + x1 y1 + x2 y2`. Isometries are 3x3 Lorentz matrices.

mod dd;
mod geodesic;
mod isometry;
mod point;
mod trig;

pub use geodesic::{geodesic_through, FermiCoords, Geodesic};
pub use isometry::{
    reflect, rotate_about, translate_along, transported_product, Isometry, Orientation,
};
pub use point::{
    acosh1p, angle_at, cosh_distance_minus_one, direction, distance, midpoint, minkowski, HPoint,
};
pub use trig::{hyp_pythagoras, lambert_quad, right_triangle, LambertQuad};

#[allow(unused_imports)]
pub(crate) use trig::cosh_m1;
