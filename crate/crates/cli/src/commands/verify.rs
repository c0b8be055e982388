use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::Args;
use hypbisect::verify::{reports_to_json, run_all, SuiteConfig};
use serde_json::{json, Value};

use crate::output::{json, write_atomic};
use crate::{CliError, RunConfig};

const CHECKS: [&str; 10] = [
    "symmetry",
    "lambert",
    "pythagoras",
    "closest_point",
    "collinearity_discrimination",
    "phi_axis_constancy",
    "phi_nonconstant",
    "taylor",
    "shared_leaves",
    "foliation",
];

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Random cases per randomised check.
    #[arg(long, default_value_t = 3)]
    cases: usize,
    /// Per-check threshold, as NAME=VALUE. Repeatable. `--tol` sets all others.
    #[arg(long = "threshold", value_name = "NAME=VALUE")]
    thresholds: Vec<String>,
}

fn parse_thresholds(items: &[String]) -> Result<BTreeMap<String, f64>, CliError> {
    let mut out = BTreeMap::new();
    for item in items {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("threshold {item:?} is not NAME=VALUE")))?;
        if !CHECKS.contains(&name) {
            return Err(CliError::Usage(format!(
                "unknown check {name:?}; known: {}",
                CHECKS.join(", ")
            )));
        }
        let v: f64 = value
            .parse()
            .map_err(|e| CliError::Usage(format!("threshold {item:?}: {e}")))?;
        if !(v >= 0.0 && v.is_finite()) {
            return Err(CliError::Usage(format!(
                "threshold {item:?} must be non-negative"
            )));
        }
        out.insert(name.to_string(), v);
    }
    Ok(out)
}

/// Default `--tol`: none, every check keeps its own threshold.
pub fn run(cfg: &RunConfig, args: &VerifyArgs) -> Result<bool, CliError> {
    if args.cases == 0 {
        return Err(CliError::Usage("--cases must be at least 1".into()));
    }
    let suite = SuiteConfig {
        seed: cfg.seed,
        cases: args.cases,
        thresholds: parse_thresholds(&args.thresholds)?,
        threshold: cfg.tol.map(|_| cfg.tol_or(0.0)).transpose()?,
    };
    let reports = run_all(&suite);
    let body: Value = serde_json::from_str(&reports_to_json(&reports)).expect("suite JSON parses");
    let all_passed = reports.iter().all(|r| r.passed);
    let doc = json!({
        "config": {
            "seed": suite.seed,
            "cases": suite.cases,
            "tol": suite.threshold,
            "thresholds": suite.thresholds,
        },
        "all_passed": body["all_passed"],
        "reports": body["reports"],
    });
    let report_path = write_atomic(&cfg.out, "verify_report.json", &json(&doc))?;

    let mut summary = String::new();
    let _ = writeln!(summary, "# seed: {}  cases: {}", suite.seed, suite.cases);
    for r in &reports {
        let _ = writeln!(
            summary,
            "{:<4} {:<28} max_residual {:.3e}  threshold {:.3e}{}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.max_residual,
            r.threshold,
            r.error
                .as_deref()
                .map(|e| format!("  error: {e}"))
                .unwrap_or_default()
        );
    }
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name.as_str())
        .collect();
    let _ = writeln!(
        summary,
        "{} of {} checks passed{}",
        reports.len() - failed.len(),
        reports.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failing: {}", failed.join(", "))
        }
    );
    write_atomic(&cfg.out, "verify_summary.txt", &summary)?;
    print!("{summary}");
    println!("report: {}", report_path.display());
    Ok(all_passed)
}
