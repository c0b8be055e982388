use std::path::PathBuf;

use clap::Args;
use hypbisect::bidisk::{
    pair_error, recover_pair, sample_bisector, BPair, BPoint, FermiBox, RecoveryOptions,
    RecoveryResult,
};
use hypbisect::GeomError;
use serde_json::{json, Value};

use super::{parse_xyxy, point_json};
use crate::output::{json, num, write_atomic, Csv};
use crate::{CliError, RunConfig};

pub const DEFAULT_TOL: f64 = 1e-4;

#[derive(Args, Debug)]
pub struct RecoverArgs {
    /// Planted x as `a,b,c,d`: factor 1 at (a,b), factor 2 at (c,d), model coordinates.
    #[arg(long, value_parser = parse_xyxy, allow_hyphen_values = true, requires = "y", conflicts_with = "samples")]
    x: Option<[f64; 4]>,
    /// Planted y, same layout as `--x`.
    #[arg(long, value_parser = parse_xyxy, allow_hyphen_values = true, requires = "x")]
    y: Option<[f64; 4]>,
    /// CSV of bisector samples, four model coordinates per row.
    #[arg(long, required_unless_present = "x")]
    samples: Option<PathBuf>,
    /// Samples drawn from a planted pair.
    #[arg(long, default_value_t = 200)]
    n_samples: usize,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
}

fn bpoint(cfg: &RunConfig, v: [f64; 4]) -> Result<BPoint, CliError> {
    Ok(BPoint::new(
        cfg.point([v[0], v[1]])?,
        cfg.point([v[2], v[3]])?,
    ))
}

fn bpoint_json(p: &BPoint) -> Value {
    json!({ "first": point_json(&p.first), "second": point_json(&p.second) })
}

fn pair_json(bp: &BPair) -> Value {
    json!({ "x": bpoint_json(bp.x()), "y": bpoint_json(bp.y()) })
}

/// Reads rows of four numbers; `#` lines and a non-numeric header are skipped.
fn read_samples(cfg: &RunConfig, path: &PathBuf) -> Result<Vec<BPoint>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match parse_xyxy(line) {
            Ok(v) => out.push(bpoint(cfg, v).map_err(|e| match e {
                CliError::Usage(m) => {
                    CliError::Usage(format!("{}:{}: {m}", path.display(), lineno + 1))
                }
                other => other,
            })?),
            Err(_) if out.is_empty() && line.chars().any(|c| c.is_ascii_alphabetic()) => continue,
            Err(e) => {
                return Err(CliError::Usage(format!(
                    "{}:{}: {e}",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok(out)
}

fn samples_csv(cfg: &RunConfig, samples: &[BPoint]) -> String {
    let mut csv = Csv::new(&["p1_x", "p1_y", "p2_x", "p2_y"]);
    csv.meta("seed", cfg.seed).meta("model", cfg.model.name());
    for p in samples {
        let (a, b) = (cfg.model.project(&p.first), cfg.model.project(&p.second));
        csv.row(vec![num(a[0]), num(a[1]), num(b[0]), num(b[1])]);
    }
    csv.render()
}

fn result_json(r: &RecoveryResult) -> Value {
    json!({
        "pair": pair_json(&r.pair),
        "objective": r.objective,
        "geometric_objective": r.geometric_objective,
        "restarts_used": r.restarts_used,
        "converged": r.converged,
        "ambiguous": r.ambiguous,
        "conditioning_warning": r.conditioning_warning,
        "minimizers": r.minimizers.iter().map(pair_json).collect::<Vec<_>>(),
    })
}

/// Default `--tol`: 1e-4 on the factor-wise error against a planted pair.
pub fn run(cfg: &RunConfig, args: &RecoverArgs) -> Result<bool, CliError> {
    let tol = cfg.tol_or(DEFAULT_TOL)?;
    let planted = match (args.x, args.y) {
        (Some(x), Some(y)) => Some(
            BPair::new(bpoint(cfg, x)?, bpoint(cfg, y)?)
                .map_err(|e| CliError::Usage(e.to_string()))?,
        ),
        _ => None,
    };
    let samples = match (&planted, &args.samples) {
        (Some(bp), _) => {
            let s = sample_bisector(bp, args.n_samples, cfg.seed, FermiBox::default())
                .map_err(|e| CliError::Failure(e.to_string()))?;
            write_atomic(&cfg.out, "recover_samples.csv", &samples_csv(cfg, &s))?;
            s
        }
        (None, Some(path)) => read_samples(cfg, path)?,
        (None, None) => return Err(CliError::Usage("give --x and --y, or --samples".into())),
    };
    let opts = RecoveryOptions {
        seed: cfg.seed,
        restarts: args.restarts,
        ..Default::default()
    };
    let (result, failure) = match recover_pair(&samples, &opts) {
        Ok(r) => (r, None),
        Err(GeomError::NoConvergence { best }) => (*best, Some("no restart converged".to_string())),
        Err(
            e @ (GeomError::TooFewSamples { .. }
            | GeomError::DegenerateSamples { .. }
            | GeomError::InvalidParameter(_)),
        ) => return Err(CliError::Usage(e.to_string())),
        Err(e) => return Err(CliError::Failure(e.to_string())),
    };
    let error = planted.map(|bp| pair_error(&result.pair, &bp));
    let passed = failure.is_none() && !result.ambiguous && error.is_none_or(|e| e < tol);
    let doc = json!({
        "seed": cfg.seed,
        "tolerance": tol,
        "objective_tolerance": opts.obj_tol,
        "model": cfg.model.name(),
        "samples": samples.len(),
        "planted": planted.as_ref().map(pair_json),
        "planted_generic": planted.as_ref().map(|bp| bp.is_generic()),
        "error_vs_planted": error,
        "result": result_json(&result),
        "failure": failure,
        "passed": passed,
    });
    write_atomic(&cfg.out, "recover.json", &json(&doc))?;
    println!(
        "objective {:.3e}, converged {}, ambiguous {} ({} minimizers), restarts {}{}",
        result.objective,
        result.converged,
        result.ambiguous,
        result.minimizers.len(),
        result.restarts_used,
        error
            .map(|e| format!(", error vs planted {e:.3e}"))
            .unwrap_or_default()
    );
    if let Some(f) = &failure {
        eprintln!(
            "recovery failed: {f}; best objective {:.3e}",
            result.objective
        );
    }
    Ok(passed)
}
