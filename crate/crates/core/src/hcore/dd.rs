//! Minimal double-double arithmetic for the one place where it matters:
//! `cosh d - 1` between two hyperboloid points. The naive Minkowski product
//! cancels catastrophically once the coordinates grow like `e^r`.

use std::ops::{Add, Mul, Sub};

#[derive(Clone, Copy, Debug)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd {
        hi: s,
        lo: b - (s - a),
    }
}

#[inline]
pub(crate) fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd {
        hi: p,
        lo: a.mul_add(b, -p),
    }
}

impl Dd {
    pub(crate) fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub(crate) fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::from_f64(0.0);
        }
        let s = self.hi.sqrt();
        let resid = (self - two_prod(s, s)).to_f64();
        quick_two_sum(s, resid / (2.0 * s))
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let v = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(v.hi, v.lo + t.lo)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + Dd {
            hi: -o.hi,
            lo: -o.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.hi, o.hi);
        quick_two_sum(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }
}

/// Time coordinate `sqrt(1 + a^2 + b^2)` of the hyperboloid point over `(a, b)`.
pub(crate) fn lift(a: f64, b: f64) -> Dd {
    (Dd::from_f64(1.0) + two_prod(a, a) + two_prod(b, b)).sqrt()
}

/// `cosh d(p, q) - 1` for the hyperboloid points over spatial parts `p`, `q`.
pub(crate) fn cosh_minus_one(p: [f64; 2], q: [f64; 2]) -> f64 {
    let time = lift(p[0], p[1]) * lift(q[0], q[1]);
    let space = two_prod(p[0], q[0]) + two_prod(p[1], q[1]);
    (time - space - Dd::from_f64(1.0)).to_f64().max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_two_has_double_double_accuracy() {
        let r = Dd::from_f64(2.0).sqrt();
        let back = (r * r - Dd::from_f64(2.0)).to_f64();
        assert!(back.abs() < 1e-30, "{back}");
    }

    #[test]
    fn far_points_keep_their_separation() {
        // Two points on the x1 axis at radii 20 and 20.5.
        let (r1, r2) = (20.0f64, 20.5f64);
        let c1 = cosh_minus_one([r1.sinh(), 0.0], [r2.sinh(), 0.0]);
        let d = 2.0 * (c1 / 2.0).sqrt().asinh();
        assert!((d - 0.5).abs() < 1e-12, "{d}");
    }
}
