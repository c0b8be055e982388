//! Acceptance gate: every criterion at its pinned tolerance and time budget.
//! Prints one PASS/FAIL line per criterion and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hypbisect::bidisk::{
    bisector_residual, bisectors_equal_test, leaf, pair_error, recover_pair, sample_bisector,
    BPair, BPoint, FermiBox, RecoveryOptions,
};
use hypbisect::hcore::{
    distance, lambert_quad, reflect, right_triangle, translate_along, Geodesic, HPoint,
};
use hypbisect::squarehyp::{level, sh_related_test, LevelSet, PointPair};
use hypbisect::verify::{
    log_log_slope, phi, phi_k2_coefficient, random_bpair, random_pair, reports_to_json,
    richardson_k2, run_all, taylor_remainder, OrderedQuadruple, SuiteConfig,
};
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

fn lambert_identity() -> Outcome {
    let sides = linspace(0.1, 3.0, 5);
    let mut worst: f64 = 0.0;
    let mut min_margin = f64::INFINITY;
    for &a in &sides {
        for &k in &sides {
            let q = lambert_quad(a, k).unwrap();
            worst = worst.max((q.geometric_diagonal() - q.b).abs());
            min_margin = min_margin.min(a * a + k * k - q.b * q.b);
        }
    }
    outcome(
        worst < 1e-9 && min_margin > 0.0,
        format!("max |diagonal - B| = {worst:.2e}, min margin = {min_margin:.4e}"),
    )
}

fn pythagoras() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = Geodesic::new(
        HPoint::from_spatial(-0.4, 0.7),
        Vector3::new(0.0, 0.3, -1.0),
    )
    .unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (a, b): (f64, f64) = (rng.gen_range(0.1..3.0), rng.gen_range(0.1..3.0));
        let [_, p, q] = right_triangle(&g, a, b);
        let c = (a.cosh() * b.cosh()).acosh();
        worst = worst.max((distance(&p, &q) - c).abs());
    }
    outcome(worst < 1e-10, format!("max hypotenuse error = {worst:.2e}"))
}

fn symmetry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ks = linspace(-2.0, 2.0, 5);
    let ts = linspace(0.1, 3.0, 10);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let pr = random_pair(&mut rng, 0.25, 1.5);
        let r = reflect(pr.axis());
        for &k in &ks {
            let ls = LevelSet::new(pr, k);
            for &t in &ts {
                let p = ls.point_at_offset(t).unwrap();
                worst = worst.max((level(&pr, &p) - level(&pr, &r.apply(&p))).abs());
            }
        }
    }
    outcome(worst < 1e-10, format!("max residual = {worst:.2e}"))
}

fn closest_point() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ok = true;
    let mut min_deficit = f64::INFINITY;
    for _ in 0..10 {
        let pr = random_pair(&mut rng, 0.1, 2.0);
        let k = pr.half_distance();
        let sh0 = pr.bisector();
        for i in 1..=20 {
            for t in [0.25 * i as f64, -0.25 * i as f64] {
                let l = level(&pr, &translate_along(&sh0, t).apply(pr.y()));
                let deficit = 4.0 * k * k - l;
                min_deficit = min_deficit.min(deficit);
                ok &= deficit > 0.0;
            }
        }
    }
    outcome(ok, format!("min 4K^2 - L(g_t(y)) = {min_deficit:.3e}"))
}

fn phi_axis_constancy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let axis = *random_pair(&mut rng, 0.5, 1.0).axis();
        let a: f64 = rng.gen_range(0.3..2.0);
        let b = a + rng.gen_range(0.1..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let b = b.abs().max(0.05);
        let om = OrderedQuadruple::on_axis(&axis, [-a, a, -b, b]).unwrap();
        let expected = a / b;
        for i in 1..=25 {
            for s in [0.1 * i as f64, -0.1 * i as f64] {
                let v = phi(&om, &axis.point_at(s)).unwrap();
                worst = worst.max((v - expected).abs());
            }
        }
    }
    outcome(worst < 1e-9, format!("max |Phi - A/B| = {worst:.2e}"))
}

fn phi_nonconstancy() -> Outcome {
    // Fig. 3 ordering v, y, x, u at -2, -1, 1, 3 with w at -1.5.
    let axis = Geodesic::new(HPoint::from_spatial(0.1, -0.2), Vector3::new(0.0, 1.0, 0.4)).unwrap();
    let om = OrderedQuadruple::on_axis(&axis, [1.0, -1.0, 3.0, -2.0]).unwrap();
    let w = -1.5;
    let at = |k: f64| {
        phi(
            &om,
            &axis.fermi_point(hypbisect::hcore::FermiCoords::new(w, k)),
        )
        .unwrap()
    };
    let phi0 = at(0.0);
    let ks = linspace(0.02, 0.4, 20);
    let mut decreasing = true;
    let mut prev = phi0;
    for &k in &ks {
        let v = at(k);
        decreasing &= v < prev;
        prev = v;
    }
    let g = [0.02, 0.04, 0.08].map(|k: f64| (at(k) - phi0) / (k * k));
    let fitted = richardson_k2(g);
    let predicted = phi_k2_coefficient(2.5, 0.5, 4.5, 0.5);
    let rel = (fitted - predicted).abs() / predicted.abs();
    outcome(
        decreasing && rel < 0.01,
        format!(
            "strictly decreasing: {decreasing} (Phi(0) = {phi0:.6}, Phi(0.4) = {prev:.6}); \
             K^2 coefficient fitted {fitted:.6} vs predicted {predicted:.6} (rel {rel:.1e})"
        ),
    )
}

fn taylor() -> Outcome {
    let ss = [0.2, 0.1, 0.05, 0.025];
    let mut worst: f64 = 0.0;
    let mut slopes = Vec::new();
    for t in [0.5, 1.0, 2.0] {
        let rem: Vec<f64> = ss.iter().map(|&s| taylor_remainder(s, t)).collect();
        let slope = log_log_slope(&ss, &rem);
        worst = worst.max((slope - 4.0).abs());
        slopes.push(format!("{slope:.4}"));
    }
    outcome(worst <= 0.1, format!("exponents [{}]", slopes.join(", ")))
}

fn foliation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let bp = random_bpair(&mut rng, 0.3, 1.2);
        for k in linspace(-2.0, 2.0, 5) {
            for p in leaf(&bp, k).unwrap().grid(2.0, 5).unwrap() {
                worst = worst.max(bisector_residual(&bp, &p).abs());
            }
        }
    }
    outcome(worst < 1e-10, format!("max residual = {worst:.2e}"))
}

fn random_point(rng: &mut ChaCha8Rng) -> HPoint {
    HPoint::from_spatial(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn recovery_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut good = 0;
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let bp = BPair::new(
            BPoint::new(random_point(&mut rng), random_point(&mut rng)),
            BPoint::new(random_point(&mut rng), random_point(&mut rng)),
        )
        .unwrap();
        let samples = sample_bisector(&bp, 200, i, FermiBox::default()).unwrap();
        let opts = RecoveryOptions {
            seed: i,
            restarts: 16,
            ..Default::default()
        };
        if let Ok(r) = recover_pair(&samples, &opts) {
            let e = pair_error(&r.pair, &bp);
            worst = worst.max(e);
            if r.converged && e < 1e-4 {
                good += 1;
            }
        }
    }
    outcome(
        good >= 18,
        format!("{good}/20 recovered, worst error {worst:.2e}"),
    )
}

fn discrimination() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let ks = linspace(-2.0, 2.0, 5);
    let mut not_related = 0;
    for _ in 0..100 {
        let base = random_pair(&mut rng, 0.2, 1.5);
        let other_k = loop {
            let k: f64 = rng.gen_range(0.2..1.5);
            if (k - base.half_distance()).abs() > 0.05 {
                break k;
            }
        };
        let other = PointPair::on_axis(base.axis(), 0.0, other_k).unwrap();
        if !sh_related_test(&base, &other, &ks, 9, 1e-8)
            .unwrap()
            .is_related()
        {
            not_related += 1;
        }
    }
    let mut related = 0;
    for _ in 0..10 {
        let p = random_pair(&mut rng, 0.2, 1.5);
        if sh_related_test(&p, &p, &ks, 9, 1e-8).unwrap().is_related() {
            related += 1;
        }
    }
    let mut not_equal = 0;
    for i in 0..20 {
        let a = random_bpair(&mut rng, 0.3, 1.2);
        let b = random_bpair(&mut rng, 0.3, 1.2);
        if !bisectors_equal_test(&a, &b, 50, 1e-8, i)
            .unwrap()
            .is_equal()
        {
            not_equal += 1;
        }
    }
    outcome(
        not_related == 100 && related == 10 && not_equal == 20,
        format!("collinear NotRelated {not_related}/100, equal Related {related}/10, bisectors NotEqual {not_equal}/20"),
    )
}

fn non_generic_ambiguity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let shared = random_point(&mut rng);
    let bp = BPair::new(
        BPoint::new(shared, random_point(&mut rng)),
        BPoint::new(shared, random_point(&mut rng)),
    )
    .unwrap();
    let samples = sample_bisector(&bp, 200, 11, FermiBox::default()).unwrap();
    match recover_pair(&samples, &RecoveryOptions::default()) {
        Ok(r) => outcome(
            r.ambiguous,
            format!(
                "ambiguous: {}, {} distinct minimizers",
                r.ambiguous,
                r.minimizers.len()
            ),
        ),
        Err(e) => outcome(false, format!("recovery failed: {e}")),
    }
}

fn determinism() -> Outcome {
    let cfg = SuiteConfig::default();
    let a = reports_to_json(&run_all(&cfg));
    let b = reports_to_json(&run_all(&cfg));
    outcome(a == b, format!("{} bytes, identical: {}", a.len(), a == b))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 12] = [
        (
            "Lambert identity and strict margin",
            lambert_identity,
            Duration::from_secs(1),
        ),
        (
            "hyperbolic Pythagorean theorem",
            pythagoras,
            Duration::from_secs(1),
        ),
        (
            "level symmetry under axis reflection",
            symmetry,
            Duration::from_secs(1),
        ),
        (
            "closest point on the flow along SH_0",
            closest_point,
            Duration::from_secs(2),
        ),
        (
            "Phi constant on the axis",
            phi_axis_constancy,
            Duration::from_secs(1),
        ),
        (
            "Phi strictly decreasing off the axis",
            phi_nonconstancy,
            Duration::from_secs(1),
        ),
        (
            "fourth-order Taylor remainder",
            taylor,
            Duration::from_secs(1),
        ),
        ("foliation by leaves", foliation, Duration::from_secs(5)),
        (
            "pair recovery round trip",
            recovery_round_trip,
            Duration::from_secs(60),
        ),
        (
            "discrimination of distinct pairs",
            discrimination,
            Duration::from_secs(30),
        ),
        (
            "non-generic ambiguity",
            non_generic_ambiguity,
            Duration::from_secs(30),
        ),
        (
            "deterministic verify reports",
            determinism,
            Duration::from_secs(30),
        ),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let passed = out.passed && in_time;
        if !passed {
            failures += 1;
        }
        println!(
            "criterion {:>2} {:<40} {}  {} [{:.2?} / {:?}{}]",
            i + 1,
            name,
            if passed { "PASS" } else { "FAIL" },
            out.detail,
            elapsed,
            budget,
            if in_time { "" } else { ", over budget" },
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
