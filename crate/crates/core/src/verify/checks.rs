use super::{phi, CheckReport, OrderedQuadruple, Witness};
use crate::bidisk::{bisector_residual, leaf, BPair};
use crate::hcore::{
    distance, hyp_pythagoras, lambert_quad, reflect, right_triangle, translate_along, FermiCoords,
    Geodesic, HPoint,
};
use crate::squarehyp::{level, sh_related_test, LevelSet, Mismatch, PointPair, ShRelation};

pub const SYMMETRY_THRESHOLD: f64 = 1e-10;
pub const LAMBERT_THRESHOLD: f64 = 1e-9;
pub const PYTHAGORAS_THRESHOLD: f64 = 1e-10;
pub const PHI_AXIS_THRESHOLD: f64 = 1e-9;
/// Relative error allowed on the fitted `K^2` coefficient of `Phi`.
pub const PHI_COEFFICIENT_THRESHOLD: f64 = 0.01;
/// Allowed deviation of the fitted remainder exponent from 4.
pub const TAYLOR_SLOPE_THRESHOLD: f64 = 0.1;
pub const SHARED_LEAVES_THRESHOLD: f64 = 1e-8;
pub const FOLIATION_THRESHOLD: f64 = 1e-10;

fn pair_points(p: &PointPair) -> Vec<HPoint> {
    vec![*p.x(), *p.y()]
}

/// `|level(p) - level(R p)|` for `R` the reflection in the pair's axis, at
/// the points of `SH_k` with perpendicular offset `t`.
pub fn check_symmetry(pair: &PointPair, k_list: &[f64], t_list: &[f64]) -> CheckReport {
    let mut r = CheckReport::new("symmetry", SYMMETRY_THRESHOLD)
        .param("pair", pair_points(pair))
        .param("k", k_list)
        .param("t", t_list);
    let refl = reflect(pair.axis());
    for &k in k_list {
        let ls = LevelSet::new(*pair, k);
        for &t in t_list {
            match ls.point_at_offset(t) {
                Ok(p) => {
                    let q = refl.apply(&p);
                    let res = level(pair, &p) - level(pair, &q);
                    r.observe(res, || {
                        Witness::new(format!("k={k} t={t}"), vec![p, q], res)
                    });
                }
                Err(e) => r.fail_with(&e),
            }
        }
    }
    r.finish()
}

/// Lambert quadrilaterals over a grid of `(A, K)`: the constructed diagonal
/// against the closed form, the hyperbolic identity, and `A^2 + K^2 > B^2`.
pub fn check_lambert(grid: &[(f64, f64)]) -> CheckReport {
    let mut r = CheckReport::new("lambert", LAMBERT_THRESHOLD).param("grid", grid);
    let mut min_margin = f64::INFINITY;
    let mut worst_angle: f64 = 0.0;
    for &(a, k) in grid {
        let q = match lambert_quad(a, k) {
            Ok(q) => q,
            Err(e) => {
                r.fail_with(&e);
                continue;
            }
        };
        let res = (q.geometric_diagonal() - q.b)
            .abs()
            .max(q.identity_residual());
        r.observe(res, || {
            Witness::new(format!("A={a} K={k}"), q.vertices.to_vec(), res)
        });
        let margin = q.strict_margin();
        min_margin = min_margin.min(margin);
        if !(margin > 0.0) {
            r.violate(Witness::new(
                format!("margin A={a} K={k}"),
                q.vertices.to_vec(),
                margin,
            ));
        }
        for ang in &q.interior_angles()[1..] {
            worst_angle = worst_angle.max((ang - std::f64::consts::FRAC_PI_2).abs());
        }
    }
    r.metric("min_margin", min_margin);
    r.metric("max_right_angle_defect", worst_angle);
    r.finish()
}

/// Right triangles with legs `(a, b)` on a fixed frame: measured hypotenuse
/// against `arccosh(cosh a cosh b)`.
pub fn check_pythagoras(legs: &[(f64, f64)]) -> CheckReport {
    let mut r = CheckReport::new("pythagoras", PYTHAGORAS_THRESHOLD).param("legs", legs);
    let g = Geodesic::new(
        HPoint::from_spatial(0.3, -0.2),
        nalgebra::Vector3::new(0.0, 0.8, 0.6),
    )
    .expect("transverse direction");
    for &(a, b) in legs {
        let [c, p, q] = right_triangle(&g, a, b);
        let res = distance(&p, &q) - hyp_pythagoras(a, b);
        r.observe(res, || {
            Witness::new(format!("a={a} b={b}"), vec![c, p, q], res)
        });
    }
    r.finish()
}

/// Flows `y` along `SH_0(x,y)` and checks `L(g_t(y)) < 4K^2` for `t != 0`,
/// with the level strictly decreasing in `|t|` on each side.
pub fn check_closest_point(pair: &PointPair, t_grid: &[f64]) -> CheckReport {
    let mut r = CheckReport::new("closest_point", 0.0)
        .param("pair", pair_points(pair))
        .param("t", t_grid);
    let k = pair.half_distance();
    let top = 4.0 * k * k;
    let sh0 = pair.bisector();
    let mut samples: Vec<(f64, f64, HPoint)> = t_grid
        .iter()
        .filter(|t| **t != 0.0)
        .map(|&t| {
            let p = translate_along(&sh0, t).apply(pair.y());
            (t, level(pair, &p), p)
        })
        .collect();
    let mut min_margin = f64::INFINITY;
    for &(t, l, p) in &samples {
        let margin = top - l;
        min_margin = min_margin.min(margin);
        if !(margin > 0.0) {
            r.violate(Witness::new(format!("t={t}"), vec![p], l));
        }
    }
    samples.sort_by(|a, b| a.0.abs().total_cmp(&b.0.abs()));
    for side in [1.0, -1.0] {
        let mut prev: Option<(f64, f64)> = None;
        for &(t, l, p) in samples.iter().filter(|s| s.0.signum() == side) {
            if let Some((pt, pl)) = prev {
                if !(l < pl) {
                    r.violate(Witness::new(
                        format!("not decreasing between t={pt} and t={t}"),
                        vec![p],
                        l - pl,
                    ));
                }
            }
            prev = Some((t, l));
        }
    }
    r.metric("half_distance", k);
    r.metric("min_margin", min_margin);
    r.finish()
}

/// Two pairs sharing `SH_0` and the verdict expected from the level-set test.
#[derive(Clone, Copy, Debug)]
pub struct DiscriminationCase {
    pub first: PointPair,
    pub second: PointPair,
    pub expect_related: bool,
}

impl DiscriminationCase {
    pub fn new(first: PointPair, second: PointPair, expect_related: bool) -> Self {
        Self {
            first,
            second,
            expect_related,
        }
    }
}

/// Largest distance from sample points of `SH_0(b)` to `SH_0(a)`.
pub fn sh0_mismatch(a: &PointPair, b: &PointPair) -> f64 {
    let sa = a.bisector();
    let sb = b.bisector();
    [-2.0, 0.0, 2.0]
        .iter()
        .map(|s| sa.distance_to(&sb.point_at(*s)))
        .fold(0.0, f64::max)
}

/// Runs the level-set relation test on two pairs that share their zero level
/// set. Equal pairs must come out related; any other configuration must not.
pub fn check_collinearity_discrimination(
    case: &DiscriminationCase,
    k_samples: &[f64],
    probe_count: usize,
    tol: f64,
) -> CheckReport {
    let mut r = CheckReport::new("collinearity_discrimination", 0.0)
        .param("first", pair_points(&case.first))
        .param("second", pair_points(&case.second))
        .param("expect_related", case.expect_related)
        .param("k", k_samples)
        .param("probe_tolerance", tol);
    let shared = sh0_mismatch(&case.first, &case.second);
    r.metric("sh0_mismatch", shared);
    if shared > 1e-9 {
        r.violate(Witness::new(
            "pairs do not share SH_0",
            pair_points(&case.second),
            shared,
        ));
        return r.finish();
    }
    match sh_related_test(&case.first, &case.second, k_samples, probe_count, tol) {
        Ok(ShRelation::Related { table }) => {
            let drift = table.iter().map(|(k, m)| (k - m).abs()).fold(0.0, f64::max);
            r.metric("related", 1.0);
            r.metric("max_table_drift", drift);
            if !case.expect_related {
                r.violate(Witness::new(
                    "distinct pairs reported related",
                    pair_points(&case.second),
                    0.0,
                ));
            }
        }
        Ok(ShRelation::NotRelated { k, witness }) => {
            r.metric("related", 0.0);
            r.metric("witness_k", k);
            let w = match witness {
                Mismatch::Spread { points, levels } => Witness::new(
                    format!("level spread at k={k}"),
                    points.to_vec(),
                    levels[1] - levels[0],
                ),
                Mismatch::ShiftedZero { point, level } => {
                    Witness::new("zero level shifted", vec![point], level)
                }
            };
            if case.expect_related {
                r.violate(w);
            } else {
                r.witnesses.push(w);
            }
        }
        Err(e) => r.fail_with(&e),
    }
    r.finish()
}

/// Collinear pairs `(x,y) = (-a, a)` and `(u,v) = (-b, b)` on `axis`: `Phi`
/// at 50 axis points off the common `SH_0` against `a / b`.
pub fn check_phi_axis_constancy(axis: &Geodesic, a: f64, b: f64) -> CheckReport {
    let mut r =
        CheckReport::new("phi_axis_constancy", PHI_AXIS_THRESHOLD).param("half_distances", [a, b]);
    let omega = if (a - b).abs() > 0.0 {
        OrderedQuadruple::on_axis(axis, [-a, a, -b, b])
    } else {
        // Equal pairs: the quadruple is (x, y, x, y), kept as two identical pairs.
        OrderedQuadruple::on_axis(axis, [-a, a, -a - 1.0, a + 1.0]).map(|mut q| {
            q.uv = q.xy;
            q
        })
    };
    let omega = match omega {
        Ok(o) => o,
        Err(e) => {
            r.fail_with(&e);
            return r.finish();
        }
    };
    let expected = omega.pair_xy().half_distance() / omega.pair_uv().half_distance();
    r.metric("expected", expected);
    let mut sides = [f64::NAN; 2];
    for i in 1..=25 {
        for (j, sign) in [1.0, -1.0].into_iter().enumerate() {
            let s = sign * 0.1 * i as f64;
            let p = axis.point_at(s);
            match phi(&omega, &p) {
                Ok(v) => {
                    sides[j] = v;
                    let res = v - expected;
                    r.observe(res, || Witness::new(format!("s={s}"), vec![p], v));
                }
                Err(e) => r.fail_with(&e),
            }
        }
    }
    r.metric("side_difference", (sides[0] - sides[1]).abs());
    r.finish()
}

/// `Phi` along the perpendicular at axis arclength `w`, parameterised by the
/// distance `K` from the axis.
pub fn phi_on_perpendicular(
    omega: &OrderedQuadruple,
    axis: &Geodesic,
    w: f64,
    k: f64,
) -> crate::Result<f64> {
    phi(omega, &axis.fermi_point(FermiCoords::new(w, k)))
}

/// `x coth x`, extended continuously by 1 at 0.
pub fn x_coth_x(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0
    } else {
        x / x.tanh()
    }
}

/// Distances `(A, B, C, D)` from `w` to `x, y, u, v` placed at `at` on the axis.
fn quadruple_distances(at: [f64; 4], w: f64) -> [f64; 4] {
    at.map(|s| (s - w).abs())
}

/// Predicted `K^2` coefficient of `Phi(K)` from `f(s,t) = t^2 + (t coth t) s^2 + O(s^4)`:
/// `Phi(K) = (A^2 - B^2 + alpha K^2) / (C^2 - D^2 + beta K^2) + O(K^4)`.
pub fn phi_k2_coefficient(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let alpha = x_coth_x(a) - x_coth_x(b);
    let beta = x_coth_x(c) - x_coth_x(d);
    let (num, den) = (a * a - b * b, c * c - d * d);
    (alpha * den - beta * num) / (den * den)
}

/// Second-order Richardson extrapolation of `(Phi(K) - Phi(0)) / K^2` to `K = 0`
/// from samples at `h`, `2h`, `4h`.
pub fn richardson_k2(g: [f64; 3]) -> f64 {
    let r1 = (4.0 * g[0] - g[1]) / 3.0;
    let r2 = (4.0 * g[1] - g[2]) / 3.0;
    (16.0 * r1 - r2) / 15.0
}

/// Non-constancy of `Phi` off the axis for the ordering `v, y, x, u` with
/// `C > A > B >= D` (distances from `w`).
///
/// `Phi(K)` is evaluated over `k_grid`; the check requires strictly monotone
/// change in the direction fixed by the sign of the predicted `K^2`
/// coefficient, and that coefficient to match a Richardson estimate from
/// `K = 0.02, 0.04, 0.08` within 1%. The margins of the final inequality with
/// `x coth x` and with `x tanh x` are both reported.
pub fn check_phi_nonconstant(axis: &Geodesic, at: [f64; 4], w: f64, k_grid: &[f64]) -> CheckReport {
    let mut r = CheckReport::new("phi_nonconstant", PHI_COEFFICIENT_THRESHOLD)
        .param("positions_xyuv", at)
        .param("w", w)
        .param("k", k_grid);
    let [a, b, c, d] = quadruple_distances(at, w);
    r.metric("A", a);
    r.metric("B", b);
    r.metric("C", c);
    r.metric("D", d);
    if !(c > a && a > b && b >= d) {
        r.fail_with(&crate::GeomError::InvalidParameter(format!(
            "ordering C > A > B >= D fails: {a}, {b}, {c}, {d}"
        )));
        return r.finish();
    }
    let omega = match OrderedQuadruple::on_axis(axis, at) {
        Ok(o) => o,
        Err(e) => {
            r.fail_with(&e);
            return r.finish();
        }
    };
    let eval = |k: f64| phi_on_perpendicular(&omega, axis, w, k);
    let phi0 = match eval(0.0) {
        Ok(v) => v,
        Err(e) => {
            r.fail_with(&e);
            return r.finish();
        }
    };
    let closed = (a * a - b * b) / (c * c - d * d);
    r.metric("phi_0", phi0);
    r.metric("phi_0_closed_form", closed);
    r.observe(phi0 - closed, || {
        Witness::new("K=0", vec![axis.point_at(w)], phi0)
    });

    let predicted = phi_k2_coefficient(a, b, c, d);
    r.metric("k2_coefficient_predicted", predicted);
    let coth_margin = (x_coth_x(a) - x_coth_x(b)) * (c * c - d * d)
        - (x_coth_x(c) - x_coth_x(d)) * (a * a - b * b);
    let x_tanh = |x: f64| x * x.tanh();
    let tanh_margin =
        (x_tanh(a) - x_tanh(b)) * (c * c - d * d) - (x_tanh(c) - x_tanh(d)) * (a * a - b * b);
    r.metric("coth_margin", coth_margin);
    r.metric("tanh_margin", tanh_margin);

    let mut values = Vec::with_capacity(k_grid.len());
    for &k in k_grid {
        match eval(k) {
            Ok(v) => values.push((k, v)),
            Err(e) => r.fail_with(&e),
        }
    }
    let direction = predicted.signum();
    r.metric("direction", direction);
    let mut prev = (0.0, phi0);
    for &(k, v) in &values {
        if !((v - prev.1) * direction > 0.0) {
            r.violate(Witness::new(
                format!("Phi not strictly monotone between K={} and K={k}", prev.0),
                vec![axis.fermi_point(FermiCoords::new(w, k))],
                v - prev.1,
            ));
        }
        prev = (k, v);
    }
    if let Some(&(_, last)) = values.last() {
        r.metric("phi_last", last);
    }

    let h = 0.02;
    let g =
        [h, 2.0 * h, 4.0 * h].map(|k| eval(k).map(|v| (v - phi0) / (k * k)).unwrap_or(f64::NAN));
    let fitted = richardson_k2(g);
    r.metric("k2_coefficient_fitted", fitted);
    let rel = (fitted - predicted).abs() / predicted.abs();
    r.observe(rel, || {
        Witness::new("K^2 coefficient", vec![axis.point_at(w)], fitted)
    });
    r.finish()
}

/// `f(s,t) = arccosh(cosh s cosh t)^2`.
pub fn taylor_f(s: f64, t: f64) -> f64 {
    hyp_pythagoras(s.abs(), t.abs()).powi(2)
}

/// `|f(s,t) - t^2 - (t coth t) s^2|`.
pub fn taylor_remainder(s: f64, t: f64) -> f64 {
    (taylor_f(s, t) - t * t - x_coth_x(t) * s * s).abs()
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

/// Fourth-order remainder of the expansion of `f` in `s`: fitted exponent per
/// `t` must be within 0.1 of 4; the constant `C = max R / s^4` is reported.
pub fn check_taylor(s_grid: &[f64], t_grid: &[f64]) -> CheckReport {
    let mut r = CheckReport::new("taylor", TAYLOR_SLOPE_THRESHOLD)
        .param("s", s_grid)
        .param("t", t_grid);
    for &t in t_grid {
        let rem: Vec<f64> = s_grid.iter().map(|&s| taylor_remainder(s, t)).collect();
        let slope = log_log_slope(s_grid, &rem);
        let c = s_grid
            .iter()
            .zip(&rem)
            .map(|(s, r)| r / s.powi(4))
            .fold(0.0, f64::max);
        r.metric(&format!("slope_t={t}"), slope);
        r.metric(&format!("constant_t={t}"), c);
        r.observe(slope - 4.0, || {
            Witness::new(format!("t={t}"), vec![], slope)
        });
    }
    r.finish()
}

/// Equal bisectors share leaves: each `SH_k` of the first factor of `bp1` is
/// a single level set `SH_m(k)` of `bp2`'s first factor, the paired second
/// factor levels negate consistently, and `m(0) = 0`. Reports the induced
/// second-factor map `k -> -m(-k)`.
pub fn check_shared_leaves(bp1: &BPair, bp2: &BPair, k_samples: &[f64]) -> CheckReport {
    let mut r = CheckReport::new("shared_leaves", SHARED_LEAVES_THRESHOLD).param("k", k_samples);
    let pairs = (0..2)
        .map(|j| Ok((bp1.factor_pair(j)?, bp2.factor_pair(j)?)))
        .collect::<crate::Result<Vec<_>>>();
    let pairs = match pairs {
        Ok(p) => p,
        Err(e) => {
            r.fail_with(&e);
            return r.finish();
        }
    };
    let neg: Vec<f64> = k_samples.iter().map(|k| -k).collect();
    let mut tables = Vec::new();
    for (j, ks) in [(0, k_samples), (1, &neg[..])] {
        let (p1, p2) = pairs[j];
        match sh_related_test(&p1, &p2, ks, 9, SHARED_LEAVES_THRESHOLD) {
            Ok(ShRelation::Related { table }) => tables.push(table),
            Ok(ShRelation::NotRelated { k, witness }) => {
                let w = match witness {
                    Mismatch::Spread { points, levels } => Witness::new(
                        format!("factor {} leaf mismatch at k={k}", j + 1),
                        points.to_vec(),
                        levels[1] - levels[0],
                    ),
                    Mismatch::ShiftedZero { point, level } => Witness::new(
                        format!("factor {} zero level shifted", j + 1),
                        vec![point],
                        level,
                    ),
                };
                r.violate(w);
                return r.finish();
            }
            Err(e) => {
                r.fail_with(&e);
                return r.finish();
            }
        }
    }
    // The leaf SH_k x SH_-k of bp1 must be SH_m x SH_-m of bp2.
    for ((k, m1), (_, m2)) in tables[0].iter().zip(&tables[1]) {
        let res = m1 + m2;
        r.observe(res, || Witness::new(format!("k={k}"), vec![], res));
        r.metric(&format!("m({k})"), *m1);
        r.metric(&format!("other_factor_map({k})"), -m2);
        if *k == 0.0 {
            r.observe(*m1, || Witness::new("m(0)", vec![], *m1));
        }
    }
    r.finish()
}

/// Leaf product grids `n x n` for each `k` against the bisector residual, and
/// collinearity of the spine's factor samples.
pub fn check_foliation(bp: &BPair, k_list: &[f64], t_max: f64, n: usize) -> CheckReport {
    let mut r = CheckReport::new("foliation", FOLIATION_THRESHOLD)
        .param("x", [bp.x().first, bp.x().second])
        .param("y", [bp.y().first, bp.y().second])
        .param("k", k_list)
        .param("t_max", t_max)
        .param("n", n);
    for &k in k_list {
        let grid = match leaf(bp, k).and_then(|l| l.grid(t_max, n)) {
            Ok(g) => g,
            Err(e) => {
                r.fail_with(&e);
                continue;
            }
        };
        for p in &grid {
            let res = bisector_residual(bp, p);
            r.observe(res, || Witness::bidisk(format!("k={k}"), p, res));
        }
    }
    if let Ok(spine) = leaf(bp, 0.0).and_then(|l| l.grid(t_max, n)) {
        let mut flat: f64 = 0.0;
        for j in 0..2 {
            let ends = (spine[0].factor(j), spine[spine.len() - 1].factor(j));
            if let Ok(g) = crate::hcore::geodesic_through(ends.0, ends.1) {
                for p in &spine {
                    flat = flat.max(g.distance_to(p.factor(j)));
                }
            }
        }
        r.metric("spine_collinearity", flat);
    }
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bidisk::BPoint;
    use nalgebra::Vector3;

    fn axis() -> Geodesic {
        Geodesic::new(HPoint::from_spatial(-0.3, 0.4), Vector3::new(0.0, 0.2, 1.0)).unwrap()
    }

    fn pair() -> PointPair {
        PointPair::new(
            HPoint::from_spatial(0.3, -0.2),
            HPoint::from_spatial(-0.6, 0.9),
        )
        .unwrap()
    }

    #[test]
    fn symmetry_passes_and_carries_witness() {
        let r = check_symmetry(&pair(), &[-5.0, 0.0, 5.0], &[0.1, 1.0, 3.0]);
        assert!(r.passed, "{r:?}");
        assert_eq!(r.witnesses.len(), 1);
    }

    #[test]
    fn lambert_grid_passes() {
        let r = check_lambert(&[(0.5, 0.5), (0.1, 3.0), (3.0, 3.0)]);
        assert!(r.passed, "{r:?}");
        assert!(r.metrics["min_margin"] > 0.0);
    }

    #[test]
    fn closest_point_half_pair() {
        let pr = PointPair::on_axis(&axis(), 0.0, 0.5).unwrap();
        let r = check_closest_point(&pr, &[-1.0, 1.0]);
        assert!(r.passed && r.metrics["min_margin"] > 0.0, "{r:?}");
    }

    #[test]
    fn phi_axis_values() {
        let r = check_phi_axis_constancy(&axis(), 1.0, 2.0);
        assert!(r.passed, "{r:?}");
        assert!((r.metrics["expected"] - 0.5).abs() < 1e-12);
        let eq = check_phi_axis_constancy(&axis(), 1.5, 1.5);
        assert!(eq.passed && (eq.metrics["expected"] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn phi_nonconstant_fig3_values() {
        let r = check_phi_nonconstant(&axis(), [1.0, -1.0, 3.0, -2.0], -1.5, &[0.02, 0.1, 0.4]);
        assert!((r.metrics["phi_0"] - 0.3).abs() < 1e-12);
        assert!((r.metrics["A"] - 2.5).abs() < 1e-15 && (r.metrics["C"] - 4.5).abs() < 1e-15);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn phi_nonconstant_rejects_wrong_ordering() {
        let r = check_phi_nonconstant(&axis(), [-1.0, 1.0, 3.0, -2.0], -1.5, &[0.1]);
        assert!(!r.passed && r.error.is_some());
    }

    #[test]
    fn richardson_recovers_quadratic_coefficient() {
        let g = [0.02, 0.04, 0.08].map(|k: f64| 3.0 + 5.0 * k * k - 7.0 * k.powi(4));
        assert!((richardson_k2(g) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn taylor_example_point() {
        // t = 1, s = 0.1.
        assert!(taylor_remainder(0.1, 1.0) < 1e-5);
        assert!(taylor_remainder(0.0, 1.3) < 1e-14);
        assert!(check_taylor(&[0.2, 0.1, 0.05, 0.025], &[0.5, 1.0, 2.0]).passed);
    }

    #[test]
    fn shared_leaves_equal_and_swapped() {
        let bp = BPair::new(
            BPoint::new(
                HPoint::from_spatial(0.2, -0.3),
                HPoint::from_spatial(-0.4, 0.1),
            ),
            BPoint::new(
                HPoint::from_spatial(-0.5, 0.6),
                HPoint::from_spatial(0.7, 0.2),
            ),
        )
        .unwrap();
        let ks = [-1.0, 0.0, 1.0];
        let same = check_shared_leaves(&bp, &bp, &ks);
        assert!(same.passed, "{same:?}");
        assert!((same.metrics["m(1)"] - 1.0).abs() < 1e-9);
        let swapped = check_shared_leaves(&bp, &bp.swapped(), &ks);
        assert!(swapped.passed, "{swapped:?}");
        assert!((swapped.metrics["m(1)"] + 1.0).abs() < 1e-9);
        let other = BPair::new(
            *bp.x(),
            BPoint::new(HPoint::origin(), HPoint::from_spatial(0.7, 0.2)),
        )
        .unwrap();
        let diff = check_shared_leaves(&bp, &other, &ks);
        assert!(!diff.passed && !diff.witnesses.is_empty());
    }
}
