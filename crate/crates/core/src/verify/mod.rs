//! Parameterised numerical checks of the geometric statements about square
//! hyperbolae and bidisk bisectors, each producing a [`CheckReport`].

mod checks;

pub use checks::*;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bidisk::{BPair, BPoint};
use crate::error::{GeomError, Result};
use crate::hcore::{distance, FermiCoords, Geodesic, HPoint};
use crate::squarehyp::{level, PointPair};
use crate::tol;

/// `Omega = (x, y, u, v)`, four distinct points.
#[derive(Clone, Copy, Debug)]
pub struct OrderedQuadruple {
    xy: PointPair,
    uv: PointPair,
}

impl OrderedQuadruple {
    pub fn new(x: HPoint, y: HPoint, u: HPoint, v: HPoint) -> Result<Self> {
        let pts = [x, y, u, v];
        for i in 0..4 {
            for j in i + 1..4 {
                let d = distance(&pts[i], &pts[j]);
                if d <= tol::CONSTRAINT {
                    return Err(GeomError::DegeneratePair {
                        distance: d,
                        tolerance: tol::CONSTRAINT,
                    });
                }
            }
        }
        Ok(OrderedQuadruple {
            xy: PointPair::new(x, y)?,
            uv: PointPair::new(u, v)?,
        })
    }

    /// Points placed at arclengths `[x, y, u, v]` on `axis`.
    pub fn on_axis(axis: &Geodesic, at: [f64; 4]) -> Result<Self> {
        let [x, y, u, v] = at.map(|s| axis.point_at(s));
        Self::new(x, y, u, v)
    }

    pub fn x(&self) -> &HPoint {
        self.xy.x()
    }
    pub fn y(&self) -> &HPoint {
        self.xy.y()
    }
    pub fn u(&self) -> &HPoint {
        self.uv.x()
    }
    pub fn v(&self) -> &HPoint {
        self.uv.y()
    }

    pub fn pair_xy(&self) -> &PointPair {
        &self.xy
    }

    pub fn pair_uv(&self) -> &PointPair {
        &self.uv
    }
}

/// Smallest `|L_{u,v}(p)|` accepted by [`phi`].
pub const FORBIDDEN_LEVEL: f64 = 1e-10;

/// `L_{x,y}(p) / L_{u,v}(p)`.
pub fn phi(omega: &OrderedQuadruple, p: &HPoint) -> Result<f64> {
    let den = level(&omega.uv, p);
    if den.abs() <= FORBIDDEN_LEVEL {
        return Err(GeomError::OnForbiddenLocus { level: den });
    }
    Ok(level(&omega.xy, p) / den)
}

/// An annotated point (or points) attached to a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub points: Vec<HPoint>,
    pub value: f64,
}

impl Witness {
    pub fn new(label: impl Into<String>, points: Vec<HPoint>, value: f64) -> Self {
        Witness {
            label: label.into(),
            points,
            value: finite(value),
        }
    }

    pub fn bidisk(label: impl Into<String>, p: &BPoint, value: f64) -> Self {
        Self::new(label, vec![p.first, p.second], value)
    }
}

/// Keeps reports representable in JSON.
fn finite(v: f64) -> f64 {
    if v.is_nan() {
        f64::MAX
    } else {
        v.clamp(f64::MIN, f64::MAX)
    }
}

/// Most witnesses kept per report.
const MAX_WITNESSES: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub parameters: BTreeMap<String, Value>,
    pub max_residual: f64,
    pub threshold: f64,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
    pub metrics: BTreeMap<String, f64>,
    pub error: Option<String>,
}

impl CheckReport {
    pub fn new(name: &str, threshold: f64) -> Self {
        CheckReport {
            name: name.to_string(),
            parameters: BTreeMap::new(),
            max_residual: 0.0,
            threshold,
            passed: false,
            witnesses: Vec::new(),
            metrics: BTreeMap::new(),
            error: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.parameters.insert(key.to_string(), v);
        self
    }

    /// Records a residual; the worst one so far keeps the leading witness slot.
    pub fn observe(&mut self, residual: f64, witness: impl FnOnce() -> Witness) {
        let r = finite(residual.abs());
        if r > self.max_residual || self.witnesses.is_empty() {
            self.max_residual = self.max_residual.max(r);
            let w = witness();
            if self.witnesses.is_empty() {
                self.witnesses.push(w);
            } else {
                self.witnesses[0] = w;
            }
        }
    }

    /// A strict inequality failed: the check cannot pass at any threshold.
    pub fn violate(&mut self, witness: Witness) {
        self.max_residual = f64::MAX;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness);
        }
    }

    pub fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_string(), finite(value));
    }

    pub fn fail_with(&mut self, err: &GeomError) {
        self.max_residual = f64::MAX;
        self.error = Some(err.to_string());
    }

    pub fn finish(mut self) -> Self {
        self.passed = self.max_residual <= self.threshold;
        self
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self.finish()
    }
}

/// Configuration of [`run_all`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random cases per randomised check.
    pub cases: usize,
    /// Per-check threshold overrides, keyed by report name.
    pub thresholds: BTreeMap<String, f64>,
    /// Overrides every threshold not named in `thresholds`.
    pub threshold: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            cases: 3,
            thresholds: BTreeMap::new(),
            threshold: None,
        }
    }
}

impl SuiteConfig {
    fn apply(&self, report: CheckReport) -> CheckReport {
        match self
            .thresholds
            .get(&report.name)
            .copied()
            .or(self.threshold)
        {
            Some(t) => report.with_threshold(t),
            None => report,
        }
    }
}

/// A pair with its midpoint in `[-1, 1]^2` (spatial coordinates), random axis
/// direction and half-distance drawn from `[k_min, k_max]`.
pub fn random_pair(rng: &mut ChaCha8Rng, k_min: f64, k_max: f64) -> PointPair {
    let center = HPoint::from_spatial(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
    let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let axis = Geodesic::new(
        center,
        nalgebra::Vector3::new(0.0, angle.cos(), angle.sin()),
    )
    .expect("spatial directions are transverse");
    let k = rng.gen_range(k_min..=k_max);
    PointPair::on_axis(&axis, 0.0, k).expect("half-distance is positive")
}

/// A generic bidisk pair assembled from two random factor pairs.
pub fn random_bpair(rng: &mut ChaCha8Rng, k_min: f64, k_max: f64) -> BPair {
    let a = random_pair(rng, k_min, k_max);
    let b = random_pair(rng, k_min, k_max);
    BPair::new(BPoint::new(*a.x(), *b.x()), BPoint::new(*a.y(), *b.y()))
        .expect("factors are distinct")
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Runs every check over its default grid. Each report is produced
/// independently; a failing computation yields a failed report rather than
/// aborting the run.
pub fn run_all(config: &SuiteConfig) -> Vec<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = Vec::new();

    let k_list = linspace(-2.0, 2.0, 5);
    let t_list = linspace(0.1, 3.0, 10);
    for _ in 0..config.cases {
        let pair = random_pair(&mut rng, 0.25, 1.5);
        out.push(check_symmetry(&pair, &k_list, &t_list));
    }

    let sides = linspace(0.1, 3.0, 5);
    let grid: Vec<(f64, f64)> = sides
        .iter()
        .flat_map(|a| sides.iter().map(move |k| (*a, *k)))
        .collect();
    out.push(check_lambert(&grid));

    let legs: Vec<(f64, f64)> = (0..100)
        .map(|_| (rng.gen_range(0.05..=3.0), rng.gen_range(0.05..=3.0)))
        .collect();
    out.push(check_pythagoras(&legs));

    let t_grid: Vec<f64> = (1..=20)
        .flat_map(|i| [0.25 * i as f64, -0.25 * i as f64])
        .collect();
    for _ in 0..config.cases {
        let pair = random_pair(&mut rng, 0.1, 2.0);
        out.push(check_closest_point(&pair, &t_grid));
    }

    let ks = linspace(-2.0, 2.0, 5);
    for case in discrimination_cases(&mut rng) {
        out.push(check_collinearity_discrimination(&case, &ks, 9, 1e-8));
    }

    let axis = *random_pair(&mut rng, 0.5, 1.0).axis();
    out.push(check_phi_axis_constancy(&axis, 1.0, 2.0));
    out.push(check_phi_axis_constancy(&axis, 1.5, 1.5));

    out.push(check_phi_nonconstant(
        &axis,
        [1.0, -1.0, 3.0, -2.0],
        -1.5,
        &linspace(0.02, 0.4, 20),
    ));

    out.push(check_taylor(&[0.2, 0.1, 0.05, 0.025], &[0.5, 1.0, 2.0]));

    let bp = random_bpair(&mut rng, 0.3, 1.2);
    out.push(check_shared_leaves(&bp, &bp, &ks));
    out.push(check_shared_leaves(&bp, &bp.swapped(), &ks));

    for _ in 0..config.cases {
        let bp = random_bpair(&mut rng, 0.3, 1.2);
        out.push(check_foliation(&bp, &ks, 2.0, 5));
    }

    out.into_iter().map(|r| config.apply(r)).collect()
}

/// Equal, distinct collinear and non-collinear pairs sharing their `SH_0`.
pub fn discrimination_cases(rng: &mut ChaCha8Rng) -> Vec<DiscriminationCase> {
    let base = random_pair(rng, 0.5, 1.0);
    let axis = *base.axis();
    let collinear = PointPair::on_axis(&axis, 0.0, 2.0 * base.half_distance()).expect("distinct");
    let (b, c) = (rng.gen_range(0.3..=1.5), rng.gen_range(0.3..=1.5));
    let rotated = PointPair::new(
        axis.fermi_point(FermiCoords::new(-b, c)),
        axis.fermi_point(FermiCoords::new(b, c)),
    )
    .expect("distinct");
    vec![
        DiscriminationCase::new(base, base, true),
        DiscriminationCase::new(base, collinear, false),
        DiscriminationCase::new(base, rotated, false),
    ]
}

/// Serialises reports as one JSON object with stable key order.
pub fn reports_to_json(reports: &[CheckReport]) -> String {
    let all_passed = reports.iter().all(|r| r.passed);
    let doc = serde_json::json!({
        "all_passed": all_passed,
        "reports": reports,
    });
    serde_json::to_string_pretty(&doc).expect("reports serialise")
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector3;

    fn axis() -> Geodesic {
        Geodesic::new(HPoint::from_spatial(0.2, 0.1), Vector3::new(0.0, 0.6, 0.8)).unwrap()
    }

    #[test]
    fn phi_of_identical_pairs_is_one() {
        let g = axis();
        let om = OrderedQuadruple::new(
            g.point_at(-1.0),
            g.point_at(1.0),
            g.point_at(-1.0),
            g.point_at(1.0),
        );
        // The quadruple must have four distinct points.
        assert!(om.is_err());
        let pr = PointPair::on_axis(&g, 0.0, 1.0).unwrap();
        let om = OrderedQuadruple { xy: pr, uv: pr };
        let p = HPoint::from_spatial(1.3, -0.4);
        assert!((phi(&om, &p).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn phi_on_axis_collinear_example() {
        // A = 1, B = 2, p at C = 3: 12 / 24.
        let g = axis();
        let om = OrderedQuadruple::on_axis(&g, [-1.0, 1.0, -2.0, 2.0]).unwrap();
        assert!((phi(&om, &g.point_at(3.0)).unwrap() - 0.5).abs() < 1e-13);
    }

    #[test]
    fn phi_rejects_forbidden_locus() {
        let g = axis();
        let om = OrderedQuadruple::on_axis(&g, [-1.0, 1.0, -2.0, 2.0]).unwrap();
        assert!(matches!(
            phi(&om, &g.point_at(0.0)),
            Err(GeomError::OnForbiddenLocus { .. })
        ));
    }

    #[test]
    fn report_passed_flag_tracks_threshold() {
        let mut r = CheckReport::new("demo", 1e-3);
        r.observe(5e-4, || Witness::new("a", vec![], 5e-4));
        r.observe(2e-4, || Witness::new("b", vec![], 2e-4));
        let r = r.finish();
        assert!(r.passed);
        assert_eq!(r.witnesses[0].label, "a");
        assert!(!r.clone().with_threshold(1e-4).passed);
        let mut v = CheckReport::new("strict", 1.0);
        v.violate(Witness::new("x", vec![], 0.0));
        assert!(!v.finish().passed);
    }

    #[test]
    fn reports_serialise_finite() {
        let mut r = CheckReport::new("nan", 1.0);
        r.observe(f64::NAN, || Witness::new("n", vec![], f64::NAN));
        let json = reports_to_json(&[r.finish()]);
        assert!(!json.contains("null") || json.contains("\"error\": null"));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["all_passed"], false);
    }

    #[test]
    fn default_suite_passes_and_is_deterministic() {
        let cfg = SuiteConfig::default();
        let a = run_all(&cfg);
        for r in &a {
            assert!(r.passed, "{}: {:?}", r.name, r);
            assert_eq!(r.passed, r.max_residual <= r.threshold);
        }
        assert_eq!(reports_to_json(&a), reports_to_json(&run_all(&cfg)));
    }

    #[test]
    fn threshold_overrides_propagate() {
        let mut cfg = SuiteConfig {
            cases: 1,
            ..Default::default()
        };
        cfg.thresholds.insert("taylor".into(), 0.5);
        cfg.threshold = Some(0.0);
        let reports = run_all(&cfg);
        let taylor = reports.iter().find(|r| r.name == "taylor").unwrap();
        assert_eq!(taylor.threshold, 0.5);
        let sym = reports.iter().find(|r| r.name == "symmetry").unwrap();
        assert_eq!(sym.threshold, 0.0);
        assert!(reports.iter().any(|r| !r.passed));
    }

    #[test]
    fn taylor_slopes_match_high_precision_values() {
        // mpmath (50 digits): fitted exponents 3.998136, 3.997772, 3.996879.
        let r = check_taylor(&[0.2, 0.1, 0.05, 0.025], &[0.5, 1.0, 2.0]);
        for (t, want) in [("0.5", 3.998136), ("1", 3.997772), ("2", 3.996879)] {
            let got = r.metrics[&format!("slope_t={t}")];
            assert!((got - want).abs() < 1e-5, "t={t}: {got}");
        }
    }
}
