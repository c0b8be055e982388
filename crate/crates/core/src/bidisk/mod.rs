//! The bidisk `H2 x H2` with the L2 product metric, bisectors of point pairs
//! and their foliation by products of square hyperbolae.

mod recover;

pub use recover::{
    bisectors_equal_test, canonical_order, pair_error, recover_pair, BisectorVerdict,
    RecoveryOptions, RecoveryResult,
};

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::hcore::{distance, midpoint, FermiCoords, Geodesic, HPoint};
use crate::squarehyp::{self, LevelSet, PointPair};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BPoint {
    pub first: HPoint,
    pub second: HPoint,
}

impl BPoint {
    pub fn new(first: HPoint, second: HPoint) -> Self {
        BPoint { first, second }
    }

    pub fn factor(&self, j: usize) -> &HPoint {
        if j == 0 {
            &self.first
        } else {
            &self.second
        }
    }
}

/// `sqrt(d^2(p1,q1) + d^2(p2,q2))`.
pub fn bidistance(p: &BPoint, q: &BPoint) -> f64 {
    distance(&p.first, &q.first).hypot(distance(&p.second, &q.second))
}

/// An ordered pair of distinct bidisk points.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BPair {
    x: BPoint,
    y: BPoint,
    generic: bool,
}

impl BPair {
    pub fn new(x: BPoint, y: BPoint) -> Result<Self> {
        let d = bidistance(&x, &y);
        if d <= tol::CONSTRAINT {
            return Err(GeomError::DegeneratePair {
                distance: d,
                tolerance: tol::CONSTRAINT,
            });
        }
        let generic = distance(&x.first, &y.first) > tol::CONSTRAINT
            && distance(&x.second, &y.second) > tol::CONSTRAINT;
        Ok(BPair { x, y, generic })
    }

    pub fn x(&self) -> &BPoint {
        &self.x
    }

    pub fn y(&self) -> &BPoint {
        &self.y
    }

    pub fn is_generic(&self) -> bool {
        self.generic
    }

    pub fn swapped(&self) -> BPair {
        BPair {
            x: self.y,
            y: self.x,
            generic: self.generic,
        }
    }

    /// The factor pair `(x_j, y_j)`; fails when the factor coordinates coincide.
    pub fn factor_pair(&self, j: usize) -> Result<PointPair> {
        PointPair::new(*self.x.factor(j), *self.y.factor(j))
            .map_err(|_| GeomError::NonGenericBisector { factor: j + 1 })
    }

    fn factor_pairs(&self) -> Result<(PointPair, PointPair)> {
        Ok((self.factor_pair(0)?, self.factor_pair(1)?))
    }
}

pub fn is_generic(bp: &BPair) -> bool {
    bp.is_generic()
}

fn factor_level(x: &HPoint, y: &HPoint, p: &HPoint) -> f64 {
    let dx = distance(x, p);
    let dy = distance(y, p);
    (dx - dy) * (dx + dy)
}

/// `rho^2(x,p) - rho^2(y,p)`, written as the sum of the two factor levels.
pub fn bisector_residual(bp: &BPair, p: &BPoint) -> f64 {
    factor_level(&bp.x.first, &bp.y.first, &p.first)
        + factor_level(&bp.x.second, &bp.y.second, &p.second)
}

pub fn bisector_contains(bp: &BPair, p: &BPoint, tol: f64) -> bool {
    bisector_residual(bp, p).abs() <= tol
}

/// The leaf `SH_k(x1,y1) x SH_{-k}(x2,y2)` of a generic bisector.
#[derive(Clone, Copy, Debug)]
pub struct Leaf {
    pub k: f64,
    pub factor1: LevelSet,
    pub factor2: LevelSet,
}

impl Leaf {
    /// The leaf point at perpendicular offsets `t1`, `t2` in the two factors.
    pub fn point(&self, t1: f64, t2: f64) -> Result<BPoint> {
        Ok(BPoint::new(
            self.factor1.point_at_offset(t1)?,
            self.factor2.point_at_offset(t2)?,
        ))
    }

    /// Product grid of `n x n` points with offsets spread over `[-t_max, t_max]`.
    pub fn grid(&self, t_max: f64, n: usize) -> Result<Vec<BPoint>> {
        let offsets: Vec<f64> = if n == 1 {
            vec![0.0]
        } else {
            (0..n)
                .map(|i| -t_max + 2.0 * t_max * i as f64 / (n - 1) as f64)
                .collect()
        };
        let mut firsts = Vec::with_capacity(n);
        let mut seconds = Vec::with_capacity(n);
        for &t in &offsets {
            firsts.push(self.factor1.point_at_offset(t)?);
            seconds.push(self.factor2.point_at_offset(t)?);
        }
        Ok(firsts
            .iter()
            .flat_map(|a| seconds.iter().map(move |b| BPoint::new(*a, *b)))
            .collect())
    }
}

pub fn leaf(bp: &BPair, k: f64) -> Result<Leaf> {
    let (p1, p2) = bp.factor_pairs()?;
    Ok(Leaf {
        k,
        factor1: LevelSet::new(p1, k),
        factor2: LevelSet::new(p2, -k),
    })
}

/// The level set of the second factor that completes `p1` to a bisector point.
pub fn complete_coordinate(bp: &BPair, p1: &HPoint) -> Result<LevelSet> {
    let (p1_pair, p2_pair) = bp.factor_pairs()?;
    Ok(LevelSet::new(p2_pair, -p1_pair.level(p1)))
}

/// Fermi-coordinate ranges `|s| <= s_max`, `|t| <= t_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FermiBox {
    pub s_max: f64,
    pub t_max: f64,
}

impl Default for FermiBox {
    fn default() -> Self {
        FermiBox {
            s_max: 3.0,
            t_max: 3.0,
        }
    }
}

impl FermiBox {
    pub fn collapsed() -> Self {
        FermiBox {
            s_max: 0.0,
            t_max: 0.0,
        }
    }

    fn is_valid(&self) -> bool {
        self.s_max >= 0.0 && self.t_max >= 0.0 && self.s_max.is_finite() && self.t_max.is_finite()
    }
}

fn symmetric(rng: &mut ChaCha8Rng, half: f64) -> f64 {
    if half > 0.0 {
        rng.gen_range(-half..=half)
    } else {
        0.0
    }
}

/// Reference frame of one factor: the axis of `(x_j, y_j)` based at their
/// midpoint, or a coordinate frame at the shared point when they coincide.
fn factor_frame(x: &HPoint, y: &HPoint) -> (Geodesic, Option<PointPair>) {
    match PointPair::new(*x, *y) {
        Ok(pair) => (*pair.axis(), Some(pair)),
        Err(_) => {
            let g = Geodesic::new(*x, Vector3::new(0.0, 1.0, 0.0))
                .or_else(|_| Geodesic::new(*x, Vector3::new(0.0, 0.0, 1.0)))
                .expect("a coordinate direction is transverse");
            (g, None)
        }
    }
}

/// Upper bound on draws per requested sample before giving up.
const MAX_DRAWS_PER_SAMPLE: usize = 1000;

/// Draws `n` bisector points whose two factors both lie in `fbox`, measured in
/// Fermi coordinates relative to each factor's reference frame.
///
/// `p1` is drawn uniformly in the box; `p2` is the point of the completing
/// level set at a uniformly drawn perpendicular offset. Draws whose `p2` falls
/// outside the box in `s` are rejected and redrawn, which keeps every sample
/// in the range where coordinates carry full precision.
///
/// A factor with `x_j = y_j` contributes level 0 everywhere; its coordinate is
/// drawn freely in the box around the shared point.
pub fn sample_bisector(bp: &BPair, n: usize, seed: u64, fbox: FermiBox) -> Result<Vec<BPoint>> {
    if n == 0 {
        return Err(GeomError::InvalidParameter("n must be at least 1".into()));
    }
    if !fbox.is_valid() {
        return Err(GeomError::InvalidParameter(format!("invalid box {fbox:?}")));
    }
    let (frame1, pair1) = factor_frame(&bp.x.first, &bp.y.first);
    let (frame2, pair2) = factor_frame(&bp.x.second, &bp.y.second);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut draws = 0;
    while out.len() < n {
        draws += 1;
        if draws > MAX_DRAWS_PER_SAMPLE * n {
            return Err(GeomError::InvalidParameter(format!(
                "box {fbox:?} holds too few bisector points"
            )));
        }
        let f1 = FermiCoords::new(
            symmetric(&mut rng, fbox.s_max),
            symmetric(&mut rng, fbox.t_max),
        );
        let t2 = symmetric(&mut rng, fbox.t_max);
        // With x2 = y2 the first factor must carry level 0, i.e. lie on SH_0.
        let f1 = if pair2.is_none() && pair1.is_some() {
            FermiCoords::new(0.0, f1.t)
        } else {
            f1
        };
        let p1 = frame1.fermi_point(f1);
        let k = pair1.as_ref().map_or(0.0, |pr| -pr.level(&p1));
        let p2 = match &pair2 {
            Some(pr) => {
                let f2 = match squarehyp::solve_on_perpendicular(pr, t2, k) {
                    Ok(f) => f,
                    Err(GeomError::BracketFailure { .. })
                        if fbox.s_max < squarehyp::BRACKET_LIMIT =>
                    {
                        continue
                    }
                    Err(e) => return Err(e),
                };
                if f2.s.abs() > fbox.s_max {
                    continue;
                }
                frame2.fermi_point(f2)
            }
            None => frame2.fermi_point(FermiCoords::new(symmetric(&mut rng, fbox.s_max), t2)),
        };
        out.push(BPoint::new(p1, p2));
    }
    Ok(out)
}

/// Midpoints of the two factor pairs, a point of the spine.
pub fn spine_point(bp: &BPair) -> Result<BPoint> {
    let (p1, p2) = bp.factor_pairs()?;
    Ok(BPoint::new(*p1.midpoint(), *p2.midpoint()))
}

/// Midpoint in each factor where defined; the shared point otherwise.
pub fn factor_midpoints(bp: &BPair) -> BPoint {
    let m = |a: &HPoint, b: &HPoint| midpoint(a, b).unwrap_or(*a);
    BPoint::new(m(&bp.x.first, &bp.y.first), m(&bp.x.second, &bp.y.second))
}
