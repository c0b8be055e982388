//! Recovering the defining pair of a bisector from points sampled on it.
//!
//! The unknowns are two bidisk points `u`, `v`, written as Fermi coordinates
//! in one chart per factor centred at the samples' barycentre. Each start runs
//! a simplex descent on the mean squared equidistance defect, then a
//! Levenberg-Marquardt polish. The defect of sample `p` is
//! `rho(u,p) - rho(v,p)` divided by the length of its gradient in `p`, which
//! is the first-order distance from `p` to the bisector of `(u,v)`. Without
//! that scaling the defect shrinks to zero as `u` approaches `v`.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{bidistance, bisector_residual, sample_bisector, BPair, BPoint, FermiBox};
use crate::error::{GeomError, Result};
use crate::hcore::{
    acosh1p, cosh_distance_minus_one, distance, minkowski, FermiCoords, Geodesic, HPoint,
};
use crate::optim::{levenberg_marquardt, nelder_mead, NelderMeadOptions};

/// Number of real unknowns: two points of `H2 x H2`.
const UNKNOWNS: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryOptions {
    /// Maximum number of starts.
    pub restarts: usize,
    /// Starts always run before stopping early on two converged candidates.
    pub min_restarts: usize,
    /// Tolerance on both the raw and the scaled RMS defect.
    pub obj_tol: f64,
    pub seed: u64,
    /// Starting Fermi coordinates are drawn from `[-start_spread, start_spread]`.
    pub start_spread: f64,
    /// Function evaluations per simplex descent.
    pub simplex_evals: usize,
    pub polish_iterations: usize,
    /// Converged candidates further apart than this (up to swap) make the
    /// result ambiguous.
    pub ambiguity_tol: f64,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        RecoveryOptions {
            restarts: 16,
            min_restarts: 2,
            obj_tol: 1e-7,
            seed: 0,
            start_spread: 2.0,
            simplex_evals: 600,
            polish_iterations: 60,
            ambiguity_tol: 1e-3,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecoveryResult {
    /// Best candidate, in canonical order.
    pub pair: BPair,
    /// RMS of `rho(u,p) - rho(v,p)` over the samples.
    pub objective: f64,
    /// RMS of the gradient-scaled defect.
    pub geometric_objective: f64,
    pub restarts_used: usize,
    pub converged: bool,
    /// Several converged candidates that differ up to swap.
    pub ambiguous: bool,
    /// Distinct converged candidates, best first.
    pub minimizers: Vec<BPair>,
    /// The recovered pair is nearly non-generic (a factor distance below 1e-6).
    pub conditioning_warning: bool,
}

/// Orders the two points lexicographically by their spatial coordinates.
pub fn canonical_order(bp: &BPair) -> BPair {
    let key = |p: &BPoint| {
        let [a, b] = p.first.spatial();
        let [c, d] = p.second.spatial();
        [a, b, c, d]
    };
    let (kx, ky) = (key(bp.x()), key(bp.y()));
    let less = kx
        .iter()
        .zip(&ky)
        .map(|(a, b)| a.total_cmp(b))
        .find(|o| o.is_ne())
        .is_none_or(|o| o.is_lt());
    if less {
        *bp
    } else {
        bp.swapped()
    }
}

/// Largest factor-wise distance between two pairs, minimised over swapping one.
pub fn pair_error(a: &BPair, b: &BPair) -> f64 {
    let worst = |p: &BPoint, q: &BPoint, r: &BPoint, s: &BPoint| {
        distance(&p.first, &r.first)
            .max(distance(&p.second, &r.second))
            .max(distance(&q.first, &s.first))
            .max(distance(&q.second, &s.second))
    };
    worst(a.x(), a.y(), b.x(), b.y()).min(worst(a.x(), a.y(), b.y(), b.x()))
}

struct Chart {
    frames: [Geodesic; 2],
}

impl Chart {
    fn around(samples: &[BPoint]) -> Result<Self> {
        let frame = |j: usize| -> Result<Geodesic> {
            let sum = samples
                .iter()
                .fold(Vector3::zeros(), |acc, p| acc + p.factor(j).vector());
            let base = HPoint::from_timelike(sum)?;
            Geodesic::new(base, Vector3::new(0.0, 1.0, 0.0))
                .or_else(|_| Geodesic::new(base, Vector3::new(0.0, 0.0, 1.0)))
        };
        Ok(Chart {
            frames: [frame(0)?, frame(1)?],
        })
    }

    fn point(&self, q: &[f64]) -> BPoint {
        BPoint::new(
            self.frames[0].fermi_point(FermiCoords::new(q[0], q[1])),
            self.frames[1].fermi_point(FermiCoords::new(q[2], q[3])),
        )
    }

    fn pair(&self, params: &[f64]) -> (BPoint, BPoint) {
        (self.point(&params[..4]), self.point(&params[4..]))
    }
}

/// Product distance from `u` to `p` and its gradient in `p`, one tangent
/// vector per factor.
fn distance_and_gradient(u: &BPoint, p: &BPoint) -> (f64, [Vector3<f64>; 2]) {
    let mut d = [0.0; 2];
    let mut w = [Vector3::zeros(); 2];
    for j in 0..2 {
        let (pj, uj) = (p.factor(j), u.factor(j));
        let c1 = cosh_distance_minus_one(pj, uj);
        d[j] = acosh1p(c1);
        // (u - p) - p (cosh d - 1) is sinh(d) times the unit direction to u.
        let dir = (uj.vector() - pj.vector()) - pj.vector() * c1;
        let ratio = if d[j] < 1e-8 { 1.0 } else { d[j] / d[j].sinh() };
        w[j] = dir * ratio;
    }
    let rho = d[0].hypot(d[1]);
    if rho == 0.0 {
        return (0.0, [Vector3::zeros(); 2]);
    }
    (rho, [-w[0] / rho, -w[1] / rho])
}

/// Raw and gradient-scaled defects of every sample.
fn defects(u: &BPoint, v: &BPoint, samples: &[BPoint]) -> (Vec<f64>, Vec<f64>) {
    let mut raw = Vec::with_capacity(samples.len());
    let mut scaled = Vec::with_capacity(samples.len());
    for p in samples {
        let (ru, gu) = distance_and_gradient(u, p);
        let (rv, gv) = distance_and_gradient(v, p);
        let r = ru - rv;
        let g2: f64 = (0..2)
            .map(|j| {
                let g = gu[j] - gv[j];
                minkowski(&g, &g).max(0.0)
            })
            .sum();
        raw.push(r);
        scaled.push(r / g2.sqrt().max(1e-8));
    }
    (raw, scaled)
}

fn rms(v: &[f64]) -> f64 {
    (v.iter().map(|e| e * e).sum::<f64>() / v.len() as f64).sqrt()
}

/// Pairs closer than this are treated as collapsed.
const COLLAPSE: f64 = 1e-9;

fn spread(samples: &[BPoint]) -> Result<f64> {
    let mut worst = f64::INFINITY;
    for j in 0..2 {
        let sum = samples
            .iter()
            .fold(Vector3::zeros(), |acc, p| acc + p.factor(j).vector());
        let center = HPoint::from_timelike(sum)?;
        let s = samples
            .iter()
            .map(|p| distance(&center, p.factor(j)))
            .fold(0.0, f64::max);
        worst = worst.min(s);
    }
    Ok(worst)
}

struct Candidate {
    pair: BPair,
    objective: f64,
    geometric: f64,
    converged: bool,
}

/// Recovers `{x, y}` from points of the bisector `E(x, y)`.
pub fn recover_pair(samples: &[BPoint], opts: &RecoveryOptions) -> Result<RecoveryResult> {
    if samples.len() < UNKNOWNS {
        return Err(GeomError::TooFewSamples {
            required: UNKNOWNS,
            got: samples.len(),
        });
    }
    if opts.restarts == 0 || !(opts.obj_tol > 0.0) || !(opts.start_spread > 0.0) {
        return Err(GeomError::InvalidParameter(format!(
            "recovery options {opts:?}"
        )));
    }
    let sp = spread(samples)?;
    if sp < 1e-6 {
        return Err(GeomError::DegenerateSamples { spread: sp });
    }

    let chart = Chart::around(samples)?;
    let n = samples.len() as f64;
    let objective = |q: &[f64]| {
        let (u, v) = chart.pair(q);
        if bidistance(&u, &v) < COLLAPSE {
            return 1e6;
        }
        let (_, scaled) = defects(&u, &v, samples);
        scaled.iter().map(|e| e * e).sum::<f64>() / n
    };
    let residuals = |q: &[f64]| {
        let (u, v) = chart.pair(q);
        if bidistance(&u, &v) < COLLAPSE {
            return vec![1e3; samples.len()];
        }
        let (_, scaled) = defects(&u, &v, samples);
        scaled.into_iter().map(|e| e / n.sqrt()).collect::<Vec<_>>()
    };
    let nm_opts = NelderMeadOptions {
        max_evals: opts.simplex_evals,
        ..Default::default()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut restarts_used = 0;
    for _ in 0..opts.restarts {
        restarts_used += 1;
        let start: Vec<f64> = (0..UNKNOWNS)
            .map(|_| rng.gen_range(-opts.start_spread..=opts.start_spread))
            .collect();
        let coarse = nelder_mead(objective, &start, 0.5, &nm_opts);
        let fine = levenberg_marquardt(residuals, &coarse.x, opts.polish_iterations);
        let best = if fine.cost.is_finite() && fine.cost <= coarse.value {
            fine.x
        } else {
            coarse.x
        };
        let (u, v) = chart.pair(&best);
        if let Ok(pair) = BPair::new(u, v) {
            let (raw, scaled) = defects(&u, &v, samples);
            let (objective, geometric) = (rms(&raw), rms(&scaled));
            candidates.push(Candidate {
                pair: canonical_order(&pair),
                objective,
                geometric,
                converged: objective < opts.obj_tol && geometric < opts.obj_tol,
            });
        }
        let hits = candidates.iter().filter(|c| c.converged).count();
        if restarts_used >= opts.min_restarts && hits >= 2 {
            break;
        }
    }

    // Stable sort keeps restart order among ties.
    candidates.sort_by(|a, b| {
        b.converged
            .cmp(&a.converged)
            .then(a.geometric.total_cmp(&b.geometric))
    });
    let mut minimizers: Vec<BPair> = Vec::new();
    for c in candidates.iter().filter(|c| c.converged) {
        if minimizers
            .iter()
            .all(|m| pair_error(m, &c.pair) > opts.ambiguity_tol)
        {
            minimizers.push(c.pair);
        }
    }
    let Some(best) = candidates.first() else {
        return Err(GeomError::DegenerateSamples { spread: sp });
    };
    let near_degenerate =
        |bp: &BPair| (0..2).any(|j| distance(bp.x().factor(j), bp.y().factor(j)) < 1e-6);
    let result = RecoveryResult {
        pair: best.pair,
        objective: best.objective,
        geometric_objective: best.geometric,
        restarts_used,
        converged: best.converged,
        ambiguous: minimizers.len() > 1,
        conditioning_warning: near_degenerate(&best.pair),
        minimizers,
    };
    if !result.converged {
        return Err(GeomError::NoConvergence {
            best: Box::new(result),
        });
    }
    Ok(result)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum BisectorVerdict {
    Equal,
    NotEqual {
        witness: BPoint,
        /// Residual of the witness under the other pair.
        residual: f64,
        /// Which bisector (1 or 2) the witness was sampled from.
        sampled_from: usize,
    },
}

impl BisectorVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, BisectorVerdict::Equal)
    }
}

/// Samples each bisector and checks every sample against the other's residual.
pub fn bisectors_equal_test(
    bp1: &BPair,
    bp2: &BPair,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<BisectorVerdict> {
    for (from, other, idx) in [(bp1, bp2, 1), (bp2, bp1, 2)] {
        for p in sample_bisector(from, n, seed, FermiBox::default())? {
            let r = bisector_residual(other, &p);
            if r.abs() > tol {
                return Ok(BisectorVerdict::NotEqual {
                    witness: p,
                    residual: r,
                    sampled_from: idx,
                });
            }
        }
    }
    Ok(BisectorVerdict::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planted() -> BPair {
        BPair::new(
            BPoint::new(
                HPoint::from_spatial(0.2, -0.3),
                HPoint::from_spatial(-0.4, 0.1),
            ),
            BPoint::new(
                HPoint::from_spatial(-0.5, 0.6),
                HPoint::from_spatial(0.7, 0.2),
            ),
        )
        .unwrap()
    }

    #[test]
    fn canonical_order_is_swap_invariant() {
        let bp = planted();
        let a = canonical_order(&bp);
        let b = canonical_order(&bp.swapped());
        assert_eq!(a.x(), b.x());
        assert_eq!(pair_error(&bp, &bp.swapped()), 0.0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let u = BPoint::new(
            HPoint::from_spatial(0.3, 0.1),
            HPoint::from_spatial(-0.2, 0.5),
        );
        let p = BPoint::new(
            HPoint::from_spatial(-0.6, 0.4),
            HPoint::from_spatial(0.9, -0.1),
        );
        let (rho, g) = distance_and_gradient(&u, &p);
        let g0 = Geodesic::new(p.first, Vector3::new(0.0, 1.0, 0.0)).unwrap();
        let h = 1e-6;
        let moved = |s: f64| BPoint::new(g0.point_at(s), p.second);
        let fd = (bidistance(&u, &moved(h)) - bidistance(&u, &moved(-h))) / (2.0 * h);
        assert!((rho - bidistance(&u, &p)).abs() < 1e-14);
        assert!((fd - minkowski(&g[0], g0.tangent())).abs() < 1e-8);
    }

    #[test]
    fn recovers_planted_pair() {
        let bp = planted();
        let samples = sample_bisector(&bp, 200, 7, FermiBox::default()).unwrap();
        let r = recover_pair(&samples, &RecoveryOptions::default()).unwrap();
        assert!(r.converged && !r.ambiguous, "{r:?}");
        assert!(
            pair_error(&r.pair, &bp) < 1e-4,
            "{}",
            pair_error(&r.pair, &bp)
        );
    }

    #[test]
    fn too_few_samples() {
        let samples = sample_bisector(&planted(), 4, 1, FermiBox::default()).unwrap();
        assert!(matches!(
            recover_pair(&samples, &RecoveryOptions::default()),
            Err(GeomError::TooFewSamples {
                required: 8,
                got: 4
            })
        ));
    }

    #[test]
    fn collapsed_samples_are_degenerate() {
        let p = BPoint::new(HPoint::origin(), HPoint::origin());
        assert!(matches!(
            recover_pair(&[p; 10], &RecoveryOptions::default()),
            Err(GeomError::DegenerateSamples { .. })
        ));
    }

    #[test]
    fn equality_test_cases() {
        let bp = planted();
        assert!(bisectors_equal_test(&bp, &bp, 30, 1e-8, 1)
            .unwrap()
            .is_equal());
        assert!(bisectors_equal_test(&bp, &bp.swapped(), 30, 1e-8, 1)
            .unwrap()
            .is_equal());
        let other = BPair::new(
            *bp.x(),
            BPoint::new(HPoint::from_spatial(-0.5, 0.6), HPoint::origin()),
        )
        .unwrap();
        match bisectors_equal_test(&bp, &other, 30, 1e-8, 1).unwrap() {
            BisectorVerdict::NotEqual {
                witness,
                residual,
                sampled_from,
            } => {
                assert_eq!(sampled_from, 1);
                assert!(residual.abs() > 1e-8);
                assert!(bisector_residual(&bp, &witness).abs() < 1e-10);
            }
            BisectorVerdict::Equal => panic!("distinct pairs reported equal"),
        }
    }
}
