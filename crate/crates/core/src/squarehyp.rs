//! Level functions `L(p) = d^2(x,p) - d^2(y,p)` of a pair of points and their
//! level sets, the square hyperbolae `SH_k(x,y)`.
//!
//! Everything is expressed in Fermi coordinates relative to the axis through
//! `x` and `y`, based at their midpoint and oriented towards `y`, so that `x`
//! sits at arclength `-K` and `y` at `+K` with `K = d(x,y)/2`. In that frame
//! the zero level `SH_0` is the perpendicular at `s = 0`, and each
//! perpendicular to the axis meets `SH_k` exactly once.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::hcore::{direction, distance, hyp_pythagoras, midpoint, FermiCoords, Geodesic, HPoint};
use crate::tol;

/// Half-width of the band of perpendicular offsets probed by [`sh_related_test`].
pub const PROBE_HALF_WIDTH: f64 = 2.0;

/// Solver bracket limit on the axis arclength.
pub const BRACKET_LIMIT: f64 = 50.0;

/// An ordered pair of distinct points together with its axis frame.
#[derive(Clone, Copy, Debug)]
pub struct PointPair {
    x: HPoint,
    y: HPoint,
    axis: Geodesic,
    half: f64,
}

impl PointPair {
    pub fn new(x: HPoint, y: HPoint) -> Result<Self> {
        let d = distance(&x, &y);
        if d <= tol::CONSTRAINT {
            return Err(GeomError::DegeneratePair {
                distance: d,
                tolerance: tol::CONSTRAINT,
            });
        }
        let mid = midpoint(&x, &y)?;
        let dir = direction(&mid, &y).ok_or(GeomError::DegeneratePair {
            distance: d,
            tolerance: tol::CONSTRAINT,
        })?;
        let axis = Geodesic::new(mid, dir)?;
        Ok(PointPair {
            x,
            y,
            axis,
            half: 0.5 * d,
        })
    }

    /// Pair placed symmetrically at arclengths `-half` and `+half` on `axis`.
    pub fn on_axis(axis: &Geodesic, center: f64, half: f64) -> Result<Self> {
        Self::new(axis.point_at(center - half), axis.point_at(center + half))
    }

    pub fn x(&self) -> &HPoint {
        &self.x
    }

    pub fn y(&self) -> &HPoint {
        &self.y
    }

    /// Axis geodesic, based at the midpoint and oriented from `x` to `y`.
    pub fn axis(&self) -> &Geodesic {
        &self.axis
    }

    pub fn midpoint(&self) -> &HPoint {
        self.axis.base()
    }

    /// `K = d(x,y) / 2`.
    pub fn half_distance(&self) -> f64 {
        self.half
    }

    /// Axis arclengths `(s_x, s_y)`.
    pub fn axis_arclengths(&self) -> (f64, f64) {
        (-self.half, self.half)
    }

    /// The zero level set `SH_0`, the perpendicular bisector of the pair.
    pub fn bisector(&self) -> Geodesic {
        self.axis.perpendicular_at(0.0)
    }

    pub fn swapped(&self) -> PointPair {
        PointPair {
            x: self.y,
            y: self.x,
            axis: self.axis.reversed(),
            half: self.half,
        }
    }

    pub fn level(&self, p: &HPoint) -> f64 {
        level(self, p)
    }
}

/// `d^2(x,p) - d^2(y,p)`.
pub fn level(pair: &PointPair, p: &HPoint) -> f64 {
    let dx = distance(&pair.x, p);
    let dy = distance(&pair.y, p);
    (dx - dy) * (dx + dy)
}

/// The level function written with right triangles on the axis:
/// `arccosh(cosh|s - s_x| cosh t)^2 - arccosh(cosh|s - s_y| cosh t)^2`.
pub fn level_fermi(pair: &PointPair, f: FermiCoords) -> f64 {
    let cx = hyp_pythagoras((f.s + pair.half).abs(), f.t.abs());
    let cy = hyp_pythagoras((f.s - pair.half).abs(), f.t.abs());
    (cx - cy) * (cx + cy)
}

/// `d/ds` of [`level_fermi`].
pub fn level_fermi_ds(pair: &PointPair, f: FermiCoords) -> f64 {
    let term = |a: f64| {
        let c = hyp_pythagoras(a.abs(), f.t.abs());
        // d(c^2)/da = 2 c sinh(a) cosh(t) / sinh(c), with c / sinh c -> 1 at 0.
        let ratio = if c < 1e-8 { 1.0 } else { c / c.sinh() };
        2.0 * ratio * a.sinh() * f.t.cosh()
    };
    term(f.s + pair.half) - term(f.s - pair.half)
}

/// `SH_k(x,y)`.
#[derive(Clone, Copy, Debug)]
pub struct LevelSet {
    pub pair: PointPair,
    pub k: f64,
}

impl LevelSet {
    pub fn new(pair: PointPair, k: f64) -> Self {
        LevelSet { pair, k }
    }

    pub fn axis_point(&self) -> HPoint {
        axis_point(self)
    }

    /// Axis arclength of `SH_k ∩ axis`.
    pub fn axis_arclength(&self) -> f64 {
        let (sx, sy) = self.pair.axis_arclengths();
        0.5 * (sx + sy) + self.k / (2.0 * (sy - sx))
    }

    pub fn residual(&self, p: &HPoint) -> f64 {
        level(&self.pair, p) - self.k
    }

    pub fn contains(&self, p: &HPoint, tol: f64) -> bool {
        self.residual(p).abs() <= tol
    }

    /// The point of `SH_k` on the perpendicular at signed offset `t`.
    pub fn point_at_offset(&self, t: f64) -> Result<HPoint> {
        let f = solve_on_perpendicular(&self.pair, t, self.k)?;
        Ok(self.pair.axis.fermi_point(f))
    }

    pub fn trace(&self, t_max: f64, n: usize) -> Result<TracedCurve> {
        trace(self, t_max, n)
    }
}

/// Closed-form intersection of `SH_k` with the axis.
pub fn axis_point(ls: &LevelSet) -> HPoint {
    ls.pair.axis.point_at(ls.axis_arclength())
}

/// Finds the axis arclength `s` with `level_fermi((s, t)) = k`.
///
/// The level is strictly increasing in `s`, so the root is bracketed by
/// geometric expansion around the axis solution, narrowed by bisection and
/// polished with Newton steps that are only accepted inside the bracket.
pub fn solve_on_perpendicular(pair: &PointPair, t: f64, k: f64) -> Result<FermiCoords> {
    if !(t.is_finite() && k.is_finite()) {
        return Err(GeomError::InvalidParameter(format!("t = {t}, k = {k}")));
    }
    let g = |s: f64| level_fermi(pair, FermiCoords::new(s, t)) - k;
    let fail = || GeomError::BracketFailure {
        t,
        k,
        limit: BRACKET_LIMIT,
    };

    let guess = (k / (4.0 * pair.half)).clamp(-BRACKET_LIMIT, BRACKET_LIMIT);
    let (mut lo, mut hi) = (guess, guess);
    let mut step = 0.5;
    while g(lo) > 0.0 {
        if lo <= -BRACKET_LIMIT {
            return Err(fail());
        }
        lo = (lo - step).max(-BRACKET_LIMIT);
        step *= 2.0;
    }
    step = 0.5;
    while g(hi) < 0.0 {
        if hi >= BRACKET_LIMIT {
            return Err(fail());
        }
        hi = (hi + step).min(BRACKET_LIMIT);
        step *= 2.0;
    }
    if lo == hi {
        return Ok(FermiCoords::new(lo, t));
    }

    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        let v = g(mid);
        if v == 0.0 {
            return Ok(FermiCoords::new(mid, t));
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut s = 0.5 * (lo + hi);
    let mut newton_ok = true;
    for _ in 0..5 {
        let v = g(s);
        if v == 0.0 {
            break;
        }
        let slope = level_fermi_ds(pair, FermiCoords::new(s, t));
        let next = s - v / slope;
        if !(next >= lo && next <= hi) {
            newton_ok = false;
            break;
        }
        if v < 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        if next == s {
            break;
        }
        s = next;
    }
    if !newton_ok {
        // Plain bisection down to the resolution of f64.
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        s = if g(lo).abs() < g(hi).abs() { lo } else { hi };
    }
    Ok(FermiCoords::new(s, t))
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TraceSample {
    /// Fermi coordinates relative to the pair's axis.
    pub fermi: FermiCoords,
    pub point: HPoint,
}

/// A discretised level set: `2n + 1` samples at equally spaced offsets.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TracedCurve {
    pub k: f64,
    pub samples: Vec<TraceSample>,
    /// Largest `|level(p) - k|` over the samples, measured on the hyperboloid.
    pub residual_bound: f64,
}

pub fn trace(ls: &LevelSet, t_max: f64, n: usize) -> Result<TracedCurve> {
    if n < 3 {
        return Err(GeomError::InvalidParameter(format!(
            "trace needs n >= 3, got {n}"
        )));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(GeomError::InvalidParameter(format!("t_max = {t_max}")));
    }
    let mut samples = Vec::with_capacity(2 * n + 1);
    let mut residual_bound: f64 = 0.0;
    for j in 0..=2 * n {
        let t = t_max * (j as f64 - n as f64) / n as f64;
        let fermi = solve_on_perpendicular(&ls.pair, t, ls.k)?;
        let point = ls.pair.axis.fermi_point(fermi);
        residual_bound = residual_bound.max(ls.residual(&point).abs());
        samples.push(TraceSample { fermi, point });
    }
    Ok(TracedCurve {
        k: ls.k,
        samples,
        residual_bound,
    })
}

/// Distance from `p` to the zero level set `SH_0(x,y)`.
pub fn distance_to_sh0(pair: &PointPair, p: &HPoint) -> f64 {
    pair.bisector().distance_to(p)
}

/// Which way a pair of level sets failed to match.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Mismatch {
    /// Two probes on one level set of the first pair carry different levels
    /// under the second.
    Spread {
        points: [HPoint; 2],
        levels: [f64; 2],
    },
    /// The zero level of the first pair is a nonzero level of the second.
    ShiftedZero { point: HPoint, level: f64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum ShRelation {
    /// Sampled reparametrisation table `(k, m(k))`.
    Related {
        table: Vec<(f64, f64)>,
    },
    NotRelated {
        k: f64,
        witness: Mismatch,
    },
}

impl ShRelation {
    pub fn is_related(&self) -> bool {
        matches!(self, ShRelation::Related { .. })
    }
}

fn probe_offsets(count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| -PROBE_HALF_WIDTH + 2.0 * PROBE_HALF_WIDTH * i as f64 / (count - 1) as f64)
        .collect()
}

/// Tests numerically whether every sampled `SH_k(pair1)` is a single level set
/// of `pair2`.
///
/// Each level set is probed at `probe_count` perpendicular offsets in
/// `[-PROBE_HALF_WIDTH, PROBE_HALF_WIDTH]`; the probes must agree on their
/// `pair2` level within `tol`, and `k = 0` must map to `0`.
pub fn sh_related_test(
    pair1: &PointPair,
    pair2: &PointPair,
    k_samples: &[f64],
    probe_count: usize,
    tol: f64,
) -> Result<ShRelation> {
    if probe_count < 2 {
        return Err(GeomError::InvalidParameter(
            "need at least two probes".into(),
        ));
    }
    if !k_samples.contains(&0.0) {
        return Err(GeomError::InvalidParameter(
            "k samples must include 0".into(),
        ));
    }
    let offsets = probe_offsets(probe_count);
    let mut table = Vec::with_capacity(k_samples.len());
    for &k in k_samples {
        let ls = LevelSet::new(*pair1, k);
        let mut lo = (f64::INFINITY, HPoint::origin());
        let mut hi = (f64::NEG_INFINITY, HPoint::origin());
        let mut sum = 0.0;
        for &t in &offsets {
            let p = ls.point_at_offset(t)?;
            let m = level(pair2, &p);
            sum += m;
            if m < lo.0 {
                lo = (m, p);
            }
            if m > hi.0 {
                hi = (m, p);
            }
        }
        if hi.0 - lo.0 > tol {
            return Ok(ShRelation::NotRelated {
                k,
                witness: Mismatch::Spread {
                    points: [lo.1, hi.1],
                    levels: [lo.0, hi.0],
                },
            });
        }
        if k == 0.0 && (sum / probe_count as f64).abs() > tol {
            return Ok(ShRelation::NotRelated {
                k,
                witness: Mismatch::ShiftedZero {
                    point: lo.1,
                    level: sum / probe_count as f64,
                },
            });
        }
        table.push((k, sum / probe_count as f64));
    }
    Ok(ShRelation::Related { table })
}

/// Report-only probe of the general closest-point observation: whether the
/// axis point of `SH_k` is the sample closest to `SH_0` along a trace.
/// Returns the smallest excess distance of an off-axis sample (positive when
/// the axis point wins).
pub fn axis_point_closest_margin(ls: &LevelSet, t_max: f64, n: usize) -> Result<f64> {
    let curve = trace(ls, t_max, n)?;
    let axis_d = distance_to_sh0(&ls.pair, &ls.axis_point());
    Ok(curve
        .samples
        .iter()
        .filter(|s| s.fermi.t != 0.0)
        .map(|s| distance_to_sh0(&ls.pair, &s.point) - axis_d)
        .fold(f64::INFINITY, f64::min))
}
